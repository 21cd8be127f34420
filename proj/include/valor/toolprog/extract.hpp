#pragma once

#include <string>

namespace valor::toolprog {

enum class FormatErrorKind {
    None,
    MissingPlan,
    MissingAnswer,
    EmptyPlan,
    EmptyAnswer,
};

struct PlanAndCode {
    bool ok = false;
    FormatErrorKind error = FormatErrorKind::None;
    std::string plan;
    std::string code;
};

// Pulls the first <plan> pair and the first <answer> pair out of a raw model
// reply. A missing or unclosed tag pair reads as missing; a whitespace-only
// interior reads as empty. This predicate *is* the format reward.
PlanAndCode parse_llm_output(const std::string& raw);

const char* format_error_name(FormatErrorKind kind);

}  // namespace valor::toolprog
