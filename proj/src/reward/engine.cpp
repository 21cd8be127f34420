#include "valor/reward/engine.hpp"

#include "valor/toolprog/ast.hpp"
#include "valor/util/text.hpp"

namespace valor::reward {

const char* head_name(VerifierHead head) {
    switch (head) {
        case VerifierHead::Logic: return "logic";
        case VerifierHead::Attribute: return "attribute";
        case VerifierHead::Spatial: return "spatial";
        case VerifierHead::Adherence: return "adherence";
    }
    return "?";
}

bool RewardVector::flagged(const std::string& flag) const {
    for (const auto& f : flags) {
        if (f == flag) return true;
    }
    return false;
}

int format_reward(const std::string& raw_output) {
    return toolprog::parse_llm_output(raw_output).ok ? 1 : 0;
}

int syntax_reward(const std::string& code, const runtime::Budget& budget) {
    toolprog::ToolProgram program;
    try {
        program = toolprog::parse_program(code);
    } catch (const std::exception&) {
        return 0;
    }
    return runtime::dry_run(program, budget).pass ? 1 : 0;
}

std::optional<int> parse_verifier_verdict(const std::string& reply) {
    const auto spans = util::extract_tag_spans(reply, "answer");
    if (spans.empty()) return std::nullopt;
    const std::string verdict = util::trim(spans.back());
    if (verdict == "0") return 0;
    if (verdict == "1") return 1;
    return std::nullopt;
}

static std::string head_template(VerifierHead head) {
    switch (head) {
        case VerifierHead::Logic: return "logic_reward";
        case VerifierHead::Attribute: return "attribute_reward";
        case VerifierHead::Spatial: return "spatial_reward";
        case VerifierHead::Adherence: return "adherence_reward";
    }
    return "";
}

VerifierOutcome verifier_reward(VerifierHead head, const std::string& query,
                                const std::string& plan, const std::string& code,
                                const std::string& api_doc, tools::ChatClient& client,
                                const PromptStore& prompts, const VerifierSettings& settings) {
    std::vector<std::pair<std::string, std::string>> subs;
    if (head == VerifierHead::Adherence) {
        subs = {{"plan", plan}, {"code", code}, {"api", api_doc}};
    } else {
        subs = {{"query", query}, {"plan", plan}, {"api", api_doc}};
    }
    const std::string prompt = prompts.fill(head_template(head), subs);

    VerifierOutcome out;
    tools::ChatRequest request = tools::ChatRequest::simple(settings.model, prompt);
    request.temperature = settings.temperature;

    // one re-ask on an unparseable verdict, fail closed afterwards
    for (int ask = 0; ask < 2; ++ask) {
        std::string reply;
        bool reached = false;
        for (int attempt = 0; attempt < std::max(1, settings.max_attempts); ++attempt) {
            try {
                reply = client.complete(request);
                reached = true;
                break;
            } catch (const std::exception&) {
                continue;
            }
        }
        if (!reached) {
            out.bit = 0;
            out.flags.push_back("verifier_unavailable");
            return out;
        }
        out.transcript = reply;
        const auto verdict = parse_verifier_verdict(reply);
        if (verdict) {
            out.bit = *verdict;
            return out;
        }
    }
    out.bit = 0;
    out.flags.push_back("verdict_unparseable");
    return out;
}

RewardEngine::RewardEngine(RewardWeights weights, const PromptStore& prompts,
                           tools::ChatClient& verifier, runtime::Budget budget,
                           VerifierSettings settings)
    : weights_(weights),
      prompts_(prompts),
      verifier_(verifier),
      budget_(budget),
      settings_(std::move(settings)) {
    weights_.validate();
}

RewardVector RewardEngine::score_rollout(const std::string& query,
                                         const std::string& raw_output) const {
    RewardVector out;
    const auto extracted = toolprog::parse_llm_output(raw_output);
    out.bits.fmt = extracted.ok ? 1 : 0;
    if (!extracted.ok) {
        out.flags.push_back(std::string("format:") +
                            toolprog::format_error_name(extracted.error));
        out.total = 0.0;
        return out;  // gate closed: no verifier traffic at all
    }

    out.bits.sn = syntax_reward(extracted.code, budget_);

    static const VerifierHead kHeads[] = {VerifierHead::Logic, VerifierHead::Attribute,
                                          VerifierHead::Spatial, VerifierHead::Adherence};
    for (const VerifierHead head : kHeads) {
        const VerifierOutcome outcome =
            verifier_reward(head, query, extracted.plan, extracted.code, prompts_.api_doc(),
                            verifier_, prompts_, settings_);
        switch (head) {
            case VerifierHead::Logic: out.bits.log = outcome.bit; break;
            case VerifierHead::Attribute: out.bits.att = outcome.bit; break;
            case VerifierHead::Spatial: out.bits.sp = outcome.bit; break;
            case VerifierHead::Adherence: out.bits.ad = outcome.bit; break;
        }
        out.transcripts[head_name(head)] = outcome.transcript;
        for (const auto& flag : outcome.flags) {
            out.flags.push_back(std::string(head_name(head)) + ":" + flag);
        }
    }
    out.total = aggregate_reward(out.bits, weights_);
    return out;
}

}  // namespace valor::reward
