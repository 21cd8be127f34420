#include "valor/toolprog/extract.hpp"

#include <optional>

#include "valor/util/text.hpp"

namespace valor::toolprog {

static std::optional<std::string> first_span(const std::string& text, const std::string& tag) {
    const std::string open = "<" + tag + ">";
    const std::string close = "</" + tag + ">";
    const std::size_t b = text.find(open);
    if (b == std::string::npos) return std::nullopt;
    const std::size_t inner = b + open.size();
    const std::size_t e = text.find(close, inner);
    if (e == std::string::npos) return std::nullopt;
    return text.substr(inner, e - inner);
}

PlanAndCode parse_llm_output(const std::string& raw) {
    PlanAndCode out;
    const auto plan = first_span(raw, "plan");
    if (!plan) {
        out.error = FormatErrorKind::MissingPlan;
        return out;
    }
    const auto answer = first_span(raw, "answer");
    if (!answer) {
        out.error = FormatErrorKind::MissingAnswer;
        return out;
    }
    if (util::trim(*plan).empty()) {
        out.error = FormatErrorKind::EmptyPlan;
        return out;
    }
    if (util::trim(*answer).empty()) {
        out.error = FormatErrorKind::EmptyAnswer;
        return out;
    }
    out.ok = true;
    out.plan = *plan;
    out.code = *answer;
    return out;
}

const char* format_error_name(FormatErrorKind kind) {
    switch (kind) {
        case FormatErrorKind::None: return "none";
        case FormatErrorKind::MissingPlan: return "missing_plan";
        case FormatErrorKind::MissingAnswer: return "missing_answer";
        case FormatErrorKind::EmptyPlan: return "empty_plan";
        case FormatErrorKind::EmptyAnswer: return "empty_answer";
    }
    return "?";
}

}  // namespace valor::toolprog
