#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace valor::util {

using ojson = nlohmann::ordered_json;

// Deterministic single-line dump: object fields keep insertion order and
// floating-point numbers are written with 17 significant digits so replayed
// pipelines produce byte-identical artifacts.
std::string stable_dump(const ojson& value);

std::string format_double17(double v);

std::vector<ojson> read_jsonl(const std::string& path);
void write_jsonl(const std::string& path, const std::vector<ojson>& rows);

}  // namespace valor::util
