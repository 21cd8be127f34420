#include "valor/forge/verdict.hpp"

#include <set>

#include "json.hpp"

namespace valor::forge {

static std::optional<nlohmann::json> extract_json_object(const std::string& reply) {
    const std::size_t begin = reply.find('{');
    const std::size_t end = reply.rfind('}');
    if (begin == std::string::npos || end == std::string::npos || end <= begin) {
        return std::nullopt;
    }
    try {
        return nlohmann::json::parse(reply.substr(begin, end - begin + 1));
    } catch (const nlohmann::json::exception&) {
        return std::nullopt;
    }
}

std::optional<KeepDropVerdict> parse_keep_drop(const std::string& reply) {
    const auto parsed = extract_json_object(reply);
    if (!parsed) return std::nullopt;
    try {
        KeepDropVerdict verdict;
        verdict.keep_indices = parsed->at("keep_indices").get<std::vector<int>>();
        verdict.drop_indices = parsed->at("drop_indices").get<std::vector<int>>();
        if (parsed->contains("notes")) {
            for (const auto& note : parsed->at("notes")) {
                verdict.notes.push_back(note.is_string() ? note.get<std::string>() : note.dump());
            }
        }
        return verdict;
    } catch (const nlohmann::json::exception&) {
        return std::nullopt;
    }
}

void validate_partition(const KeepDropVerdict& verdict, int n) {
    std::set<int> seen;
    for (int i : verdict.keep_indices) {
        if (i < 1 || i > n) throw VerdictInvalid("keep index " + std::to_string(i) + " outside 1.." + std::to_string(n));
        if (!seen.insert(i).second) throw VerdictInvalid("index " + std::to_string(i) + " repeated");
    }
    for (int i : verdict.drop_indices) {
        if (i < 1 || i > n) throw VerdictInvalid("drop index " + std::to_string(i) + " outside 1.." + std::to_string(n));
        if (!seen.insert(i).second) throw VerdictInvalid("index " + std::to_string(i) + " repeated");
    }
    if (static_cast<int>(seen.size()) != n) {
        throw VerdictInvalid("verdict covers " + std::to_string(seen.size()) + " of " +
                             std::to_string(n) + " indices");
    }
}

std::optional<bool> parse_keep_flag(const std::string& reply) {
    const auto parsed = extract_json_object(reply);
    if (!parsed) return std::nullopt;
    try {
        return parsed->at("keep").get<bool>();
    } catch (const nlohmann::json::exception&) {
        return std::nullopt;
    }
}

}  // namespace valor::forge
