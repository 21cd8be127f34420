#pragma once

#include <cstdint>

#include "valor/grpo/math.hpp"
#include "valor/grpo/rollout.hpp"
#include "valor/runtime/interpreter.hpp"
#include "valor/tools/chat_client.hpp"
#include "valor/tools/provider.hpp"

namespace valor::grpo {

struct QueryTask {
    std::string query_id;
    std::string query;
    std::string image_ref;
};

struct PolicyUnavailable : std::runtime_error {
    explicit PolicyUnavailable(const std::string& msg) : std::runtime_error(msg) {}
};

struct BatchResult {
    std::vector<GrpoGroup> groups;
    std::vector<RolloutRecord> records;  // sorted by (query_id, member_index)
    int dropped_groups = 0;              // queries with fewer than G decodable outputs
};

struct BatchBuilderConfig {
    GrpoConfig grpo;
    runtime::Budget budget;
    double sampling_temperature = 1.0;
    std::string policy_model;
    std::uint64_t seed = 0;  // reserved for local sampling decisions
};

// Samples G policy outputs per query, scores each with the reward engine,
// executes the decoded programs against the tool provider for traces and
// answers, mean-centers advantages, and (optionally) writes the group to the
// rollout JSONL at `jsonl_path`.
BatchResult build_rollout_batch(const std::vector<QueryTask>& queries,
                                tools::ChatClient& policy, const reward::RewardEngine& engine,
                                const reward::PromptStore& prompts,
                                tools::ToolProvider& tool_provider,
                                tools::ImageResolver& resolver, const BatchBuilderConfig& cfg,
                                const std::string& jsonl_path = "");

}  // namespace valor::grpo
