#pragma once

#include <optional>
#include <string>
#include <vector>

namespace valor::forge {

// Keep/drop partition over 1..N returned by the listing-based verifier
// passes. keep and drop must cover every index exactly once.
struct KeepDropVerdict {
    std::vector<int> keep_indices;  // 1-based
    std::vector<int> drop_indices;
    std::vector<std::string> notes;
};

struct VerdictInvalid : std::runtime_error {
    explicit VerdictInvalid(const std::string& msg) : std::runtime_error(msg) {}
};

// Parses the verifier's JSON (tolerating surrounding prose) without
// validating the partition.
std::optional<KeepDropVerdict> parse_keep_drop(const std::string& reply);

// Throws VerdictInvalid unless keep and drop partition {1..n} exactly.
void validate_partition(const KeepDropVerdict& verdict, int n);

// {"keep": true/false, ...} from the per-crop verifier.
std::optional<bool> parse_keep_flag(const std::string& reply);

}  // namespace valor::forge
