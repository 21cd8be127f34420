#include "doctest.h"

#include <random>

#include "test_support.hpp"
#include "valor/reward/engine.hpp"
#include "valor/toolprog/extract.hpp"

using namespace valor;
using namespace valor::reward;

namespace {

const PromptStore& prompts() {
    static const PromptStore store = PromptStore::load(test::asset_dir() + "/prompts");
    return store;
}

std::string golden_output(int n) { return test::golden_raw(n); }

}  // namespace

TEST_CASE("weights validate") {
    CHECK_NOTHROW(RewardWeights::defaults().validate());
    RewardWeights w = RewardWeights::defaults();
    w.log = 0.2;  // sum 0.9
    CHECK_THROWS_AS(w.validate(), InvalidWeights);
    w = RewardWeights::defaults();
    w.sn = -0.1;
    w.log = 0.5;
    CHECK_THROWS_AS(w.validate(), InvalidWeights);
}

TEST_CASE("format reward equals the extraction predicate") {
    const char* cases[] = {
        "<plan>p</plan><answer>x = 1</answer>",
        "<plan></plan><answer>x</answer>",
        "<plan>p</plan>",
        "no tags at all",
        "<plan>p</plan><answer> \t </answer>",
        "<answer>x</answer><plan>p</plan>",
    };
    for (const char* raw : cases) {
        CHECK(format_reward(raw) == (toolprog::parse_llm_output(raw).ok ? 1 : 0));
    }
    CHECK(format_reward("<plan>p</plan><answer>x = 1</answer>") == 1);
    CHECK(format_reward("<plan>p</plan><answer>x = 1") == 0);
}

TEST_CASE("syntax reward: golden corpus scores 1") {
    for (int i = 1; i <= 5; ++i) {
        const auto parsed = toolprog::parse_llm_output(golden_output(i));
        REQUIRE(parsed.ok);
        CHECK(syntax_reward(parsed.code, runtime::Budget{}) == 1);
    }
}

TEST_CASE("syntax reward: parse and runtime failures score 0") {
    CHECK(syntax_reward("final_answer = (1", runtime::Budget{}) == 0);
    CHECK(syntax_reward("final_answer = 1 / 0", runtime::Budget{}) == 0);
    runtime::Budget tight;
    tight.max_steps = 50;
    CHECK(syntax_reward("while True:\n    x = 1\n", tight) == 0);
    // semantically silly but executable scores 1
    CHECK(syntax_reward("final_answer = 2 + 2\n", runtime::Budget{}) == 1);
}

TEST_CASE("verdict parsing") {
    CHECK(parse_verifier_verdict("<answer>1</answer>") == 1);
    CHECK(parse_verifier_verdict("<answer>0</answer>") == 0);
    CHECK(parse_verifier_verdict("<answer> 1 </answer>") == 1);
    CHECK(parse_verifier_verdict("prose before <answer>0</answer> prose after") == 0);
    CHECK(parse_verifier_verdict("<answer>0</answer> ... <answer>1</answer>") == 1);
    CHECK_FALSE(parse_verifier_verdict("Score: 1").has_value());
    CHECK_FALSE(parse_verifier_verdict("<answer>yes</answer>").has_value());
    CHECK_FALSE(parse_verifier_verdict("<answer>10</answer>").has_value());
    CHECK_FALSE(parse_verifier_verdict("").has_value());
}

TEST_CASE("verdict language: exactly trimmed 0 or 1 in the last span") {
    std::mt19937_64 rng(3);
    const char* fillers[] = {"", " ", "\n", "x", "score", "01"};
    for (int i = 0; i < 100; ++i) {
        const std::string filler = fillers[rng() % 6];
        const std::string last = (rng() % 2) ? "1" : "0";
        const std::string reply =
            "<answer>" + filler + "</answer> mid <answer> " + last + "\n</answer>";
        const auto verdict = parse_verifier_verdict(reply);
        REQUIRE(verdict.has_value());
        CHECK(*verdict == (last == "1" ? 1 : 0));
    }
}

TEST_CASE("aggregate reward: hand-evaluated points") {
    const RewardWeights w = RewardWeights::defaults();
    CHECK(aggregate_reward({1, 1, 1, 0, 1, 1}, w) == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(aggregate_reward({0, 1, 1, 1, 1, 1}, w) == doctest::Approx(0.0));
    CHECK(aggregate_reward({1, 1, 1, 1, 1, 1}, w) == doctest::Approx(1.0).epsilon(1e-12));
    // syntax and adherence only
    CHECK(aggregate_reward({1, 1, 0, 0, 0, 1}, w) == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("aggregate reward: exhaustive 64 combinations against a straight-line oracle") {
    const RewardWeights w = RewardWeights::defaults();
    for (int mask = 0; mask < 64; ++mask) {
        RewardBits bits;
        bits.fmt = (mask >> 0) & 1;
        bits.sn = (mask >> 1) & 1;
        bits.log = (mask >> 2) & 1;
        bits.att = (mask >> 3) & 1;
        bits.sp = (mask >> 4) & 1;
        bits.ad = (mask >> 5) & 1;
        const double expected =
            bits.fmt * (0.1 * bits.sn + 0.3 * bits.log + 0.2 * bits.att + 0.2 * bits.sp +
                        0.2 * bits.ad);
        const double got = aggregate_reward(bits, w);
        CHECK(std::fabs(got - expected) <= 1e-12);
        CHECK(got >= 0.0);
        CHECK(got <= 1.0);
        if (bits.fmt == 0) CHECK(got == 0.0);
    }
}

TEST_CASE("aggregate reward: single-head monotonicity") {
    const RewardWeights w = RewardWeights::defaults();
    for (int mask = 0; mask < 32; ++mask) {
        RewardBits bits;
        bits.fmt = 1;
        bits.sn = (mask >> 0) & 1;
        bits.log = (mask >> 1) & 1;
        bits.att = (mask >> 2) & 1;
        bits.sp = (mask >> 3) & 1;
        bits.ad = (mask >> 4) & 1;
        const double base = aggregate_reward(bits, w);
        for (int head = 0; head < 5; ++head) {
            RewardBits flipped = bits;
            int* slot = head == 0   ? &flipped.sn
                        : head == 1 ? &flipped.log
                        : head == 2 ? &flipped.att
                        : head == 3 ? &flipped.sp
                                    : &flipped.ad;
            if (*slot == 1) continue;
            *slot = 1;
            CHECK(aggregate_reward(flipped, w) >= base);
        }
    }
}

TEST_CASE("verifier reward fills the head templates") {
    std::vector<nlohmann::ordered_json> seen;
    tools::ScriptedChatClient client([&](const tools::ChatRequest& req) {
        seen.push_back(tools::chat_request_canonical(req));
        return std::string("<answer>1</answer>");
    });
    const auto outcome = verifier_reward(VerifierHead::Logic, "the query", "the plan", "code",
                                         "API DOC", client, prompts());
    CHECK(outcome.bit == 1);
    REQUIRE(seen.size() == 1);
    const std::string prompt = seen[0]["messages"][0]["parts"][0]["text"].get<std::string>();
    CHECK(prompt.find("the query") != std::string::npos);
    CHECK(prompt.find("the plan") != std::string::npos);
    CHECK(prompt.find("API DOC") != std::string::npos);
    CHECK(prompt.find("code") == std::string::npos);  // logic head never sees code

    seen.clear();
    verifier_reward(VerifierHead::Adherence, "the query", "the plan", "the code", "API DOC",
                    client, prompts());
    const std::string adh = seen[0]["messages"][0]["parts"][0]["text"].get<std::string>();
    CHECK(adh.find("the plan") != std::string::npos);
    CHECK(adh.find("the code") != std::string::npos);
    CHECK(adh.find("the query") == std::string::npos);  // adherence head never sees the query
}

TEST_CASE("verifier reward re-asks once on unparseable then fails closed") {
    int calls = 0;
    tools::ScriptedChatClient client([&](const tools::ChatRequest&) {
        ++calls;
        return std::string("no tags here");
    });
    const auto outcome = verifier_reward(VerifierHead::Spatial, "q", "p", "", "api", client,
                                         prompts());
    CHECK(outcome.bit == 0);
    CHECK(calls == 2);
    REQUIRE(outcome.flags.size() == 1);
    CHECK(outcome.flags[0] == "verdict_unparseable");
}

TEST_CASE("verifier reward fails closed when the endpoint is unreachable") {
    tools::UnreachableChatClient client;
    const auto outcome =
        verifier_reward(VerifierHead::Logic, "q", "p", "", "api", client, prompts());
    CHECK(outcome.bit == 0);
    REQUIRE(outcome.flags.size() == 1);
    CHECK(outcome.flags[0] == "verifier_unavailable");
}

TEST_CASE("score_rollout: malformed output short-circuits with zero verifier traffic") {
    tools::ScriptedChatClient client({"<answer>1</answer>"});
    RewardEngine engine(RewardWeights::defaults(), prompts(), client, runtime::Budget{});
    const auto rv = engine.score_rollout("q", "garbage with no tags");
    CHECK(rv.bits.fmt == 0);
    CHECK(rv.total == 0.0);
    CHECK(client.request_count() == 0);
    CHECK(rv.bits.sn == 0);
    CHECK(rv.bits.log == 0);
}

TEST_CASE("score_rollout: golden program with an all-ones verifier totals 1") {
    tools::ScriptedChatClient client([](const tools::ChatRequest&) {
        return std::string("<answer>1</answer>");
    });
    RewardEngine engine(RewardWeights::defaults(), prompts(), client, runtime::Budget{});
    const auto rv = engine.score_rollout("q", golden_output(1));
    CHECK(rv.bits.fmt == 1);
    CHECK(rv.bits.sn == 1);
    CHECK(rv.total == doctest::Approx(1.0));
    CHECK(client.request_count() == 4);  // one call per verifier head
    CHECK(rv.transcripts.size() == 4);
}

TEST_CASE("score_rollout: mixed verdict reproduces the worked example total") {
    // spatial, attribute, and logic judged wrong; format, syntax, adherence fine
    tools::ScriptedChatClient client([](const tools::ChatRequest& req) {
        const std::string text = req.messages.at(0).parts.at(0).text;
        const bool adherence = text.find("python program matches a pre-written plan") !=
                               std::string::npos;
        return std::string(adherence ? "<answer>1</answer>" : "<answer>0</answer>");
    });
    RewardEngine engine(RewardWeights::defaults(), prompts(), client, runtime::Budget{});
    const auto rv = engine.score_rollout("q", golden_output(2));
    CHECK(rv.bits.fmt == 1);
    CHECK(rv.bits.sn == 1);
    CHECK(rv.bits.log == 0);
    CHECK(rv.bits.att == 0);
    CHECK(rv.bits.sp == 0);
    CHECK(rv.bits.ad == 1);
    CHECK(rv.total == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("score_rollout: fuzzed tag corruptions never leak verifier calls") {
    tools::ScriptedChatClient client({"<answer>1</answer>"});
    RewardEngine engine(RewardWeights::defaults(), prompts(), client, runtime::Budget{});
    const std::string good = "<plan>plan text</plan><answer>final_answer = 1</answer>";
    std::mt19937_64 rng(11);
    int corrupted = 0;
    for (int i = 0; i < 200; ++i) {
        std::string bad = good;
        switch (rng() % 5) {
            case 0: bad.erase(bad.find("</plan>"), 7); break;
            case 1: bad.erase(bad.find("<answer>"), 8); break;
            case 2: bad = "<plan></plan><answer>final_answer = 1</answer>"; break;
            case 3: bad = "<plan>plan</plan><answer>   </answer>"; break;
            case 4: bad.erase(bad.find("</answer>"), 9); break;
        }
        if (toolprog::parse_llm_output(bad).ok) continue;  // corruption must be real
        ++corrupted;
        const auto rv = engine.score_rollout("q", bad);
        CHECK(rv.total == 0.0);
        CHECK(rv.bits.fmt == 0);
    }
    CHECK(corrupted == 200);
    CHECK(client.request_count() == 0);
}
