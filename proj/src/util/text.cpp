#include "valor/util/text.hpp"

#include <cctype>
#include <cstdlib>

namespace valor::util {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string to_lower(const std::string& s) {
    std::string out = s;
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.push_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

std::vector<std::string> split_nouns(const std::string& prompt) {
    std::vector<std::string> out;
    for (const auto& part : split(prompt, ',')) {
        auto t = trim(part);
        if (!t.empty()) out.push_back(std::move(t));
    }
    return out;
}

std::vector<std::string> extract_tag_spans(const std::string& text, const std::string& tag) {
    const std::string open = "<" + tag + ">";
    const std::string close = "</" + tag + ">";
    std::vector<std::string> spans;
    std::size_t pos = 0;
    while (true) {
        const std::size_t b = text.find(open, pos);
        if (b == std::string::npos) break;
        const std::size_t inner = b + open.size();
        const std::size_t e = text.find(close, inner);
        if (e == std::string::npos) break;
        spans.push_back(text.substr(inner, e - inner));
        pos = e + close.size();
    }
    return spans;
}

std::optional<double> parse_number(const std::string& s) {
    const std::string t = trim(s);
    if (t.empty()) return std::nullopt;
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size()) return std::nullopt;
    return v;
}

std::string fill_placeholders(std::string tmpl,
                              const std::vector<std::pair<std::string, std::string>>& subs) {
    for (const auto& [key, value] : subs) {
        const std::string needle = "{" + key + "}";
        std::size_t pos = 0;
        while ((pos = tmpl.find(needle, pos)) != std::string::npos) {
            tmpl.replace(pos, needle.size(), value);
            pos += value.size();
        }
    }
    return tmpl;
}

}  // namespace valor::util
