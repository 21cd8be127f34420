#include "valor/grpo/batch_builder.hpp"

#include <algorithm>

#include "valor/toolprog/ast.hpp"
#include "valor/toolprog/extract.hpp"
#include "valor/util/atomic_file.hpp"
#include "valor/util/jsonl.hpp"

namespace valor::grpo {

nlohmann::ordered_json rollout_to_json(const RolloutRecord& r) {
    nlohmann::ordered_json row;
    row["query_id"] = r.query_id;
    row["group_id"] = r.group_id;
    row["member_index"] = r.member_index;
    row["query"] = r.query;
    row["plan"] = r.plan;
    row["code"] = r.code;
    nlohmann::ordered_json reward;
    reward["fmt"] = r.reward_bits.fmt;
    reward["sn"] = r.reward_bits.sn;
    reward["log"] = r.reward_bits.log;
    reward["att"] = r.reward_bits.att;
    reward["sp"] = r.reward_bits.sp;
    reward["ad"] = r.reward_bits.ad;
    reward["total"] = r.reward_total;
    row["reward"] = std::move(reward);
    row["advantage"] = r.advantage;
    row["flags"] = r.flags;
    row["trace"] = r.trace;
    row["answer"] = r.answer;
    nlohmann::ordered_json transcripts = nlohmann::ordered_json::object();
    for (const auto& [head, text] : r.verifier_transcripts) transcripts[head] = text;
    row["verifier_transcripts"] = std::move(transcripts);
    return row;
}

RolloutRecord rollout_from_json(const nlohmann::ordered_json& row) {
    RolloutRecord r;
    r.query_id = row.at("query_id").get<std::string>();
    r.group_id = row.at("group_id").get<std::string>();
    r.member_index = row.at("member_index").get<int>();
    r.query = row.at("query").get<std::string>();
    r.plan = row.at("plan").get<std::string>();
    r.code = row.at("code").get<std::string>();
    const auto& reward = row.at("reward");
    r.reward_bits.fmt = reward.at("fmt").get<int>();
    r.reward_bits.sn = reward.at("sn").get<int>();
    r.reward_bits.log = reward.at("log").get<int>();
    r.reward_bits.att = reward.at("att").get<int>();
    r.reward_bits.sp = reward.at("sp").get<int>();
    r.reward_bits.ad = reward.at("ad").get<int>();
    r.reward_total = reward.at("total").get<double>();
    r.advantage = row.at("advantage").get<double>();
    r.flags = row.at("flags").get<std::vector<std::string>>();
    r.trace = row.at("trace");
    r.answer = row.at("answer");
    if (row.contains("verifier_transcripts")) {
        for (auto it = row.at("verifier_transcripts").begin();
             it != row.at("verifier_transcripts").end(); ++it) {
            r.verifier_transcripts[it.key()] = it.value().get<std::string>();
        }
    }
    return r;
}

std::string rollout_to_line(const RolloutRecord& record) {
    return util::stable_dump(rollout_to_json(record));
}

namespace {

// Executes decoded code for its trace and answer; never throws.
void attach_execution(RolloutRecord& record, tools::ToolProvider& provider,
                      tools::ImageResolver& resolver, const runtime::Budget& budget,
                      const std::string& image_ref) {
    if (record.code.empty()) return;
    toolprog::ToolProgram program;
    try {
        program = toolprog::parse_program(record.code);
    } catch (const std::exception&) {
        record.flags.push_back("execution:parse_error");
        return;
    }
    const auto result = runtime::execute(program, provider, resolver, budget, image_ref);
    for (const auto& inv : result.trace) {
        nlohmann::ordered_json row;
        row["tool"] = inv.tool;
        row["args"] = inv.args;
        row["result"] = inv.result;
        record.trace.push_back(std::move(row));
    }
    if (result.status == runtime::ExecStatus::Error) {
        record.flags.push_back(std::string("execution:") +
                               runtime::error_kind_name(result.error));
        return;
    }
    const auto answer = runtime::extract_final_answer(result);
    if (answer) {
        record.answer = runtime::value_to_json(*answer);
    } else {
        record.flags.push_back("execution:missing_final_answer");
    }
}

}  // namespace

BatchResult build_rollout_batch(const std::vector<QueryTask>& queries,
                                tools::ChatClient& policy, const reward::RewardEngine& engine,
                                const reward::PromptStore& prompts,
                                tools::ToolProvider& tool_provider,
                                tools::ImageResolver& resolver, const BatchBuilderConfig& cfg,
                                const std::string& jsonl_path) {
    cfg.grpo.validate();
    const std::string system_prompt = prompts.fill(
        "system_prompt",
        {{"api", prompts.api_doc()}, {"icl_examples", prompts.raw("icl_examples")}});

    BatchResult out;
    for (const auto& task : queries) {
        const int G = cfg.grpo.group_size;
        std::vector<RolloutRecord> members;
        bool group_complete = true;

        for (int i = 0; i < G; ++i) {
            tools::ChatRequest request;
            request.model = cfg.policy_model;
            request.temperature = cfg.sampling_temperature;
            request.tag = task.query_id + "#sample:" + std::to_string(i);
            tools::ChatMessage system;
            system.role = "system";
            system.parts.push_back(tools::ChatPart::from_text(system_prompt));
            tools::ChatMessage user;
            user.role = "user";
            user.parts.push_back(tools::ChatPart::from_text(task.query));
            request.messages = {std::move(system), std::move(user)};

            std::string raw;
            try {
                raw = policy.complete(request);
            } catch (const std::exception&) {
                group_complete = false;
                break;
            }

            RolloutRecord record;
            record.query_id = task.query_id;
            record.group_id = task.query_id;
            record.member_index = i;
            record.query = task.query;

            const auto extracted = toolprog::parse_llm_output(raw);
            if (extracted.ok) {
                record.plan = extracted.plan;
                record.code = extracted.code;
            }
            const auto reward = engine.score_rollout(task.query, raw);
            record.reward_bits = reward.bits;
            record.reward_total = reward.total;
            record.verifier_transcripts = reward.transcripts;
            for (const auto& flag : reward.flags) record.flags.push_back(flag);

            attach_execution(record, tool_provider, resolver, cfg.budget, task.image_ref);
            members.push_back(std::move(record));
        }

        if (!group_complete) {
            ++out.dropped_groups;
            continue;
        }

        std::vector<double> rewards;
        rewards.reserve(members.size());
        for (const auto& m : members) rewards.push_back(m.reward_total);
        const auto advantages = group_advantages(rewards);

        bool verifier_unavailable = false;
        for (const auto& m : members) {
            for (const auto& flag : m.flags) {
                if (flag.find("verifier_unavailable") != std::string::npos) {
                    verifier_unavailable = true;
                }
            }
        }
        for (std::size_t i = 0; i < members.size(); ++i) {
            members[i].advantage = advantages[i];
            if (verifier_unavailable) members[i].flags.push_back("excluded");
        }

        GrpoGroup group;
        group.query_id = task.query_id;
        group.rewards = rewards;
        group.advantages = advantages;
        out.groups.push_back(std::move(group));
        for (auto& m : members) out.records.push_back(std::move(m));
    }

    std::stable_sort(out.records.begin(), out.records.end(),
                     [](const RolloutRecord& a, const RolloutRecord& b) {
                         if (a.query_id != b.query_id) return a.query_id < b.query_id;
                         return a.member_index < b.member_index;
                     });
    std::stable_sort(out.groups.begin(), out.groups.end(),
                     [](const GrpoGroup& a, const GrpoGroup& b) { return a.query_id < b.query_id; });

    if (!jsonl_path.empty()) {
        std::string body;
        for (const auto& record : out.records) {
            body += rollout_to_line(record);
            body += '\n';
        }
        util::write_file_atomic(jsonl_path, body);
    }
    return out;
}

}  // namespace valor::grpo
