#include "valor/util/jsonl.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "valor/util/atomic_file.hpp"

namespace valor::util {

std::string format_double17(double v) {
    if (std::isnan(v)) return "null";
    if (std::isinf(v)) return v > 0 ? "1e999" : "-1e999";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

static void dump_rec(const ojson& v, std::string& out) {
    switch (v.type()) {
        case ojson::value_t::null:
            out += "null";
            break;
        case ojson::value_t::boolean:
            out += v.get<bool>() ? "true" : "false";
            break;
        case ojson::value_t::number_integer:
        case ojson::value_t::number_unsigned:
            out += v.dump();
            break;
        case ojson::value_t::number_float:
            out += format_double17(v.get<double>());
            break;
        case ojson::value_t::string:
            out += ojson(v.get<std::string>()).dump();
            break;
        case ojson::value_t::array: {
            out += '[';
            bool first = true;
            for (const auto& item : v) {
                if (!first) out += ',';
                first = false;
                dump_rec(item, out);
            }
            out += ']';
            break;
        }
        case ojson::value_t::object: {
            out += '{';
            bool first = true;
            for (auto it = v.begin(); it != v.end(); ++it) {
                if (!first) out += ',';
                first = false;
                out += ojson(it.key()).dump();
                out += ':';
                dump_rec(it.value(), out);
            }
            out += '}';
            break;
        }
        default:
            throw std::runtime_error("stable_dump: unsupported json type");
    }
}

std::string stable_dump(const ojson& value) {
    std::string out;
    dump_rec(value, out);
    return out;
}

std::vector<ojson> read_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<ojson> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        rows.push_back(ojson::parse(line));
    }
    return rows;
}

void write_jsonl(const std::string& path, const std::vector<ojson>& rows) {
    std::string body;
    for (const auto& row : rows) {
        body += stable_dump(row);
        body += '\n';
    }
    write_file_atomic(path, body);
}

}  // namespace valor::util
