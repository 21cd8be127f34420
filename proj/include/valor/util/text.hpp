#pragma once

#include <optional>
#include <string>
#include <vector>

namespace valor::util {

std::string trim(const std::string& s);
std::string to_lower(const std::string& s);
std::vector<std::string> split(const std::string& s, char sep);

// Comma-separated nouns of a detection prompt, trimmed, empties dropped.
std::vector<std::string> split_nouns(const std::string& prompt);

// Interiors of every non-overlapping <tag>...</tag> pair, in order.
std::vector<std::string> extract_tag_spans(const std::string& text, const std::string& tag);

std::optional<double> parse_number(const std::string& s);

// {placeholder} substitution; only the given keys are replaced, every other
// brace in the template is left alone.
std::string fill_placeholders(std::string tmpl,
                              const std::vector<std::pair<std::string, std::string>>& subs);

}  // namespace valor::util
