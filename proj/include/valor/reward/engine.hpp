#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "valor/reward/prompt_store.hpp"
#include "valor/reward/weights.hpp"
#include "valor/runtime/interpreter.hpp"
#include "valor/toolprog/extract.hpp"
#include "valor/tools/chat_client.hpp"

namespace valor::reward {

enum class VerifierHead { Logic, Attribute, Spatial, Adherence };

const char* head_name(VerifierHead head);

struct RewardVector {
    RewardBits bits;
    double total = 0.0;
    std::map<std::string, std::string> transcripts;  // head name -> raw reply
    std::vector<std::string> flags;

    bool flagged(const std::string& flag) const;
};

// 1 iff the raw output carries non-empty <plan> and <answer> pairs. Same
// predicate as parse_llm_output, by definition.
int format_reward(const std::string& raw_output);

// 1 iff the code parses in the DSL and a dummy-tool dry run finishes without
// a runtime error; budget breaches score 0.
int syntax_reward(const std::string& code, const runtime::Budget& budget);

// 0, 1, or unparseable; the last <answer> span wins and its trimmed interior
// must be exactly "0" or "1".
std::optional<int> parse_verifier_verdict(const std::string& reply);

struct VerifierOutcome {
    int bit = 0;
    std::string transcript;
    std::vector<std::string> flags;
};

struct VerifierSettings {
    double temperature = 0.0;
    int max_attempts = 3;  // transport retries
    std::string model;
};

// One LLM-judged head. Logic/attribute/spatial read (query, plan); adherence
// reads (plan, code). Unusable replies re-ask once, then fail closed to 0.
VerifierOutcome verifier_reward(VerifierHead head, const std::string& query,
                                const std::string& plan, const std::string& code,
                                const std::string& api_doc, tools::ChatClient& client,
                                const PromptStore& prompts, const VerifierSettings& settings = {});

class RewardEngine {
  public:
    RewardEngine(RewardWeights weights, const PromptStore& prompts, tools::ChatClient& verifier,
                 runtime::Budget budget, VerifierSettings settings = {});

    // Format gate first: a malformed output scores all-zero and issues no
    // verifier traffic. Otherwise syntax plus the four heads, then Eq. form.
    RewardVector score_rollout(const std::string& query, const std::string& raw_output) const;

    const RewardWeights& weights() const { return weights_; }

  private:
    RewardWeights weights_;
    const PromptStore& prompts_;
    tools::ChatClient& verifier_;
    runtime::Budget budget_;
    VerifierSettings settings_;
};

}  // namespace valor::reward
