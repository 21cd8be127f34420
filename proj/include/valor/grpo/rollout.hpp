#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "valor/reward/engine.hpp"

namespace valor::grpo {

// One policy sample: the unit of training data and of evaluation. Serialized
// one object per JSONL line with a fixed field order and 17-significant-digit
// floats so replayed runs compare byte-for-byte.
struct RolloutRecord {
    std::string query_id;
    std::string group_id;
    int member_index = 0;
    std::string query;
    std::string plan;
    std::string code;
    reward::RewardBits reward_bits;
    double reward_total = 0.0;
    double advantage = 0.0;
    std::vector<std::string> flags;
    nlohmann::ordered_json trace = nlohmann::ordered_json::array();
    nlohmann::ordered_json answer;  // null when execution never bound one
    std::map<std::string, std::string> verifier_transcripts;
};

nlohmann::ordered_json rollout_to_json(const RolloutRecord& record);
RolloutRecord rollout_from_json(const nlohmann::ordered_json& row);

std::string rollout_to_line(const RolloutRecord& record);

}  // namespace valor::grpo
