#pragma once

#include <optional>
#include <string>
#include <vector>

#include "valor/reward/prompt_store.hpp"
#include "valor/runtime/value.hpp"
#include "valor/tools/chat_client.hpp"

namespace valor::evalharness {

enum class AnswerType { YesNo, MultipleChoice, Integer, Float, OpenEnded };

AnswerType answer_type_from_text(const std::string& text);
const char* answer_type_name(AnswerType type);

// Trim + case-fold; integer-typed values compare numerically.
std::string normalize_answer(const std::string& text);

struct MatchOutcome {
    int score = 0;
    std::vector<std::string> flags;
};

// Exact match for yes/no, multiple choice, and integer answers. Multiple
// choice predictions must land on one of the options to count.
MatchOutcome exact_match(const runtime::Value& pred, const std::string& gold, AnswerType type,
                         const std::vector<std::string>& options = {});

// Confidence levels of the mean-relative-accuracy metric: 0.50 .. 0.95.
const std::vector<double>& mra_thresholds();

// (1/|C|) * sum_c 1[ |pred - gold| / |gold| < 1 - c ]. A zero gold falls
// back to the absolute-error rule |pred| < 1 - c.
double mra(double pred, double gold);

// Judge-based equivalence for open-ended answers; equal strings short-circuit
// to 1 without any judge traffic; judge failures fail closed to 0.
MatchOutcome judge_equivalence(const std::string& question, const std::string& gold,
                               const std::string& pred, tools::ChatClient& client,
                               const reward::PromptStore& prompts,
                               const std::string& judge_model = "");

}  // namespace valor::evalharness
