#include "valor/evalharness/metrics.hpp"

#include <cmath>

#include "valor/util/text.hpp"

namespace valor::evalharness {

AnswerType answer_type_from_text(const std::string& text) {
    if (text == "yes_no") return AnswerType::YesNo;
    if (text == "multiple_choice") return AnswerType::MultipleChoice;
    if (text == "integer") return AnswerType::Integer;
    if (text == "float") return AnswerType::Float;
    if (text == "open_ended") return AnswerType::OpenEnded;
    throw std::invalid_argument("unknown answer_type '" + text + "'");
}

const char* answer_type_name(AnswerType type) {
    switch (type) {
        case AnswerType::YesNo: return "yes_no";
        case AnswerType::MultipleChoice: return "multiple_choice";
        case AnswerType::Integer: return "integer";
        case AnswerType::Float: return "float";
        case AnswerType::OpenEnded: return "open_ended";
    }
    return "?";
}

std::string normalize_answer(const std::string& text) {
    return util::to_lower(util::trim(text));
}

static std::string value_as_text(const runtime::Value& v) {
    if (v.is_text()) return v.as_text();
    return runtime::to_display_text(v);
}

MatchOutcome exact_match(const runtime::Value& pred, const std::string& gold, AnswerType type,
                         const std::vector<std::string>& options) {
    MatchOutcome out;
    if (type != AnswerType::YesNo && type != AnswerType::MultipleChoice &&
        type != AnswerType::Integer) {
        throw std::invalid_argument("exact_match only scores yes/no, choice, and integer answers");
    }
    if (pred.is_none() || pred.is_list() || pred.is_map() || pred.is_callable()) {
        out.flags.push_back("unparsable_prediction");
        return out;
    }

    if (type == AnswerType::Integer) {
        const auto gold_num = util::parse_number(gold);
        std::optional<double> pred_num;
        if (pred.is_number()) {
            pred_num = pred.as_number();
        } else if (pred.is_bool()) {
            pred_num = pred.as_bool() ? 1.0 : 0.0;
        } else {
            pred_num = util::parse_number(value_as_text(pred));
        }
        if (!gold_num) {
            out.flags.push_back("unparsable_gold");
            return out;
        }
        if (!pred_num) {
            out.flags.push_back("unparsable_prediction");
            return out;
        }
        out.score = (*pred_num == *gold_num) ? 1 : 0;
        return out;
    }

    const std::string pred_text = normalize_answer(value_as_text(pred));
    const std::string gold_text = normalize_answer(gold);
    if (type == AnswerType::MultipleChoice && !options.empty()) {
        bool in_options = false;
        for (const auto& option : options) {
            if (normalize_answer(option) == pred_text) in_options = true;
        }
        if (!in_options) {
            out.flags.push_back("prediction_not_an_option");
            return out;
        }
    }
    out.score = (pred_text == gold_text) ? 1 : 0;
    return out;
}

const std::vector<double>& mra_thresholds() {
    static const std::vector<double> thresholds = [] {
        std::vector<double> out;
        for (int k = 10; k <= 19; ++k) out.push_back(k / 20.0);
        return out;
    }();
    return thresholds;
}

double mra(double pred, double gold) {
    if (!std::isfinite(pred) || !std::isfinite(gold)) return 0.0;
    const auto& thresholds = mra_thresholds();
    int hits = 0;
    for (double c : thresholds) {
        const double tolerance = 1.0 - c;
        const double err =
            gold == 0.0 ? std::fabs(pred) : std::fabs(pred - gold) / std::fabs(gold);
        if (err < tolerance) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(thresholds.size());
}

MatchOutcome judge_equivalence(const std::string& question, const std::string& gold,
                               const std::string& pred, tools::ChatClient& client,
                               const reward::PromptStore& prompts,
                               const std::string& judge_model) {
    MatchOutcome out;
    if (normalize_answer(gold) == normalize_answer(pred)) {
        out.score = 1;  // equality needs no judge
        return out;
    }
    const std::string prompt = prompts.fill(
        "synonym_judge", {{"question", question}, {"gold", gold}, {"predicted", pred}});
    tools::ChatRequest request = tools::ChatRequest::simple(judge_model, prompt);

    for (int ask = 0; ask < 2; ++ask) {
        std::string reply;
        bool reached = false;
        for (int attempt = 0; attempt < 3; ++attempt) {
            try {
                reply = client.complete(request);
                reached = true;
                break;
            } catch (const std::exception&) {
                continue;
            }
        }
        if (!reached) {
            out.flags.push_back("judge_unavailable");
            return out;
        }
        const auto spans = util::extract_tag_spans(reply, "answer");
        if (!spans.empty()) {
            const std::string verdict = util::trim(spans.back());
            if (verdict == "1") {
                out.score = 1;
                return out;
            }
            if (verdict == "0") {
                out.score = 0;
                return out;
            }
        }
    }
    out.flags.push_back("judge_unparseable");
    return out;
}

}  // namespace valor::evalharness
