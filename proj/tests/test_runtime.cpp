#include "doctest.h"

#include <chrono>

#include "test_support.hpp"
#include "valor/runtime/grounding.hpp"
#include "valor/runtime/interpreter.hpp"
#include "valor/toolprog/extract.hpp"
#include "valor/tools/dummy_provider.hpp"
#include "valor/tools/mock_provider.hpp"
#include "valor/util/jsonl.hpp"

using namespace valor;
using namespace valor::runtime;

namespace {

// Living-room fixture: sofa at depth 2, dining table at depth 3.
tools::MockToolProvider living_room_provider() {
    tools::MockToolProvider provider;
    tools::MockFixture fx;
    fx.detections.push_back({{0, 100, 50, 200}, "two-seat sofa", 0.9});
    fx.detections.push_back({{60, 120, 120, 180}, "dining table", 0.85});
    fx.depth_regions.push_back({{0, 100, 50, 200}, 2.0});
    fx.depth_regions.push_back({{60, 120, 120, 180}, 3.0});
    provider.add_fixture("fixture://livingroom", std::move(fx));
    return provider;
}

// Patio fixture: 4 placemats, 2 plants.
tools::MockToolProvider patio_provider() {
    tools::MockToolProvider provider;
    tools::MockFixture fx;
    for (int i = 0; i < 4; ++i) {
        fx.detections.push_back(
            {{10.0 + 50 * i, 10, 50.0 + 50 * i, 50}, "placemat", 0.9});
    }
    for (int i = 0; i < 2; ++i) {
        fx.detections.push_back(
            {{10.0 + 50 * i, 60, 50.0 + 50 * i, 100}, "plant", 0.9});
    }
    provider.add_fixture("fixture://patio", std::move(fx));
    return provider;
}

ExecutionResult run_source(const std::string& source, tools::ToolProvider& provider,
                           const std::string& image_ref, Budget budget = {}) {
    const auto prog = toolprog::parse_program(source);
    tools::SyntheticResolver resolver;
    return execute(prog, provider, resolver, budget, image_ref);
}

ExecutionResult run_golden(int n, tools::ToolProvider& provider, const std::string& image_ref) {
    const auto raw = toolprog::parse_llm_output(test::golden_raw(n));
    REQUIRE(raw.ok);
    return run_source(raw.code, provider, image_ref);
}

}  // namespace

TEST_CASE("single assignment completes") {
    tools::DummyToolProvider provider;
    const auto result = run_source("final_answer = 1\n", provider, "img");
    CHECK(result.status == ExecStatus::Completed);
    const auto answer = extract_final_answer(result);
    REQUIRE(answer.has_value());
    CHECK(answer->as_number() == doctest::Approx(1.0));
}

TEST_CASE("golden program 1 reproduces the derived scale answer") {
    auto provider = living_room_provider();
    const auto result = run_golden(1, provider, "fixture://livingroom");
    REQUIRE(result.status == ExecStatus::Completed);
    const auto answer = extract_final_answer(result);
    REQUIRE(answer.has_value());
    // pseudo heights 200 and 180, scale 0.5/200
    CHECK(answer->as_number() == doctest::Approx(0.45).epsilon(1e-12));
}

TEST_CASE("golden program 2 early-returns when the tv is missing") {
    auto provider = living_room_provider();
    const auto result = run_golden(2, provider, "fixture://livingroom");
    REQUIRE(result.status == ExecStatus::HaltedByReturn);
    CHECK(extract_final_answer(result)->as_text() == "sofa");
}

TEST_CASE("golden program 3 divides detection counts") {
    auto provider = patio_provider();
    const auto result = run_golden(3, provider, "fixture://patio");
    REQUIRE(result.status == ExecStatus::Completed);
    CHECK(extract_final_answer(result)->as_number() == doctest::Approx(2.0));
}

TEST_CASE("execution is deterministic with a deterministic provider") {
    auto provider = living_room_provider();
    const auto a = run_golden(1, provider, "fixture://livingroom");
    const auto b = run_golden(1, provider, "fixture://livingroom");
    CHECK(a.status == b.status);
    REQUIRE(a.trace.size() == b.trace.size());
    for (std::size_t i = 0; i < a.trace.size(); ++i) {
        CHECK(a.trace[i].tool == b.trace[i].tool);
        CHECK(util::stable_dump(a.trace[i].args) == util::stable_dump(b.trace[i].args));
        CHECK(util::stable_dump(a.trace[i].result) == util::stable_dump(b.trace[i].result));
    }
    REQUIRE(a.bindings.size() == b.bindings.size());
    for (const auto& [name, value] : a.bindings) {
        REQUIRE(b.bindings.count(name) == 1);
        CHECK(util::stable_dump(value_to_json(value)) ==
              util::stable_dump(value_to_json(b.bindings.at(name))));
    }
}

TEST_CASE("trace length equals tool call count") {
    auto provider = living_room_provider();
    const auto result = run_golden(1, provider, "fixture://livingroom");
    CHECK(result.trace.size() == static_cast<std::size_t>(result.tool_calls_used));
    CHECK(result.tool_calls_used == 3);  // one detect + two depths
    CHECK(result.steps_used <= Budget{}.max_steps);
}

TEST_CASE("infinite loop hits the step budget quickly") {
    tools::DummyToolProvider provider;
    Budget budget;
    budget.max_steps = 100000;
    const auto started = std::chrono::steady_clock::now();
    const auto result = run_source("while True:\n    x = 1\n", provider, "img", budget);
    const auto elapsed = std::chrono::steady_clock::now() - started;
    CHECK(result.status == ExecStatus::Error);
    CHECK(result.error == ErrorKind::BudgetExceededSteps);
    CHECK(std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count() < 1000);
}

TEST_CASE("tool call budget") {
    tools::DummyToolProvider provider;
    Budget budget;
    budget.max_tool_calls = 3;
    const auto result = run_source(
        "for i in range(10):\n    d = gd_detect(img_pth, \"cat\")\nfinal_answer = 1\n",
        provider, "img", budget);
    CHECK(result.status == ExecStatus::Error);
    CHECK(result.error == ErrorKind::BudgetExceededToolCalls);
}

TEST_CASE("runtime error taxonomy") {
    tools::DummyToolProvider provider;

    auto r = run_source("final_answer = missing + 1\n", provider, "img");
    CHECK(r.error == ErrorKind::UndefinedName);

    r = run_source("final_answer = 1 / 0\n", provider, "img");
    CHECK(r.error == ErrorKind::DivisionByZero);

    r = run_source("xs = [1, 2]\nfinal_answer = xs[5]\n", provider, "img");
    CHECK(r.error == ErrorKind::IndexOutOfRange);

    r = run_source("m = {\"a\": 1}\nfinal_answer = m[\"b\"]\n", provider, "img");
    CHECK(r.error == ErrorKind::IndexOutOfRange);

    r = run_source("final_answer = \"a\" + 1\n", provider, "img");
    CHECK(r.error == ErrorKind::TypeMismatch);

    // conditions must be booleans, not implicit truthiness
    r = run_source("if 1:\n    final_answer = 1\n", provider, "img");
    CHECK(r.error == ErrorKind::TypeMismatch);

    r = run_source("xs = [1]\nif xs:\n    final_answer = 1\n", provider, "img");
    CHECK(r.error == ErrorKind::TypeMismatch);
}

TEST_CASE("dry run passes the golden corpus") {
    for (int i = 1; i <= 5; ++i) {
        const auto raw = toolprog::parse_llm_output(test::golden_raw(i));
        REQUIRE(raw.ok);
        const auto prog = toolprog::parse_program(raw.code);
        const auto result = dry_run(prog, Budget{});
        CHECK_MESSAGE(result.pass, "golden ", i, " failed: ", result.reason);
    }
}

TEST_CASE("dry run failures") {
    auto result = dry_run(toolprog::parse_program("final_answer = undefined_var + 1\n"), Budget{});
    CHECK_FALSE(result.pass);
    CHECK(result.reason.find("undefined_name") != std::string::npos);

    result = dry_run(toolprog::parse_program("x = 1 / 0\n"), Budget{});
    CHECK_FALSE(result.pass);
    CHECK(result.reason.find("division") != std::string::npos);
}

TEST_CASE("dry run equals execute with dummy tools") {
    const char* sources[] = {
        "final_answer = 1\n",
        "dets = gd_detect(img_pth, \"cat, dog\")\nfinal_answer = len(dets)\n",
        "x = 1 / 0\n",
        "final_answer = missing\n",
    };
    for (const char* src : sources) {
        const auto prog = toolprog::parse_program(src);
        const auto dr = dry_run(prog, Budget{});
        tools::DummyToolProvider provider;
        tools::SyntheticResolver resolver;
        const auto exec_result = execute(prog, provider, resolver, Budget{}, "dry://image");
        CHECK(dr.pass == (exec_result.status != ExecStatus::Error));
    }
}

TEST_CASE("dummy detection echoes prompt nouns for branch coverage") {
    tools::DummyToolProvider provider;
    const auto result = run_source(
        "dets = gd_detect(img_pth, \"tv, sofa\")\n"
        "labels = []\n"
        "for d in dets:\n"
        "    labels = labels + [d[\"label\"]]\n"
        "final_answer = labels\n",
        provider, "img");
    REQUIRE(result.status == ExecStatus::Completed);
    const auto labels = extract_final_answer(result);
    REQUIRE(labels->is_list());
    REQUIRE(labels->as_list()->size() == 2);
    CHECK((*labels->as_list())[0].as_text() == "tv");
    CHECK((*labels->as_list())[1].as_text() == "sofa");
}

TEST_CASE("extract_final_answer") {
    tools::DummyToolProvider provider;
    auto result = run_source("answer = 3\n", provider, "img");
    CHECK_FALSE(extract_final_answer(result).has_value());

    result = run_source("final_answer = 0.45\n", provider, "img");
    CHECK(extract_final_answer(result)->as_number() == doctest::Approx(0.45));

    result = run_source("final_answer = \"tv\"\n", provider, "img");
    CHECK(extract_final_answer(result)->as_text() == "tv");

    // a callable does not count as an answer
    result = run_source("def f():\n    return 1\nfinal_answer = f\n", provider, "img");
    CHECK_FALSE(extract_final_answer(result).has_value());
}

TEST_CASE("builtins behave") {
    tools::DummyToolProvider provider;
    auto answer = [&](const std::string& src) {
        const auto result = run_source(src, provider, "img");
        REQUIRE_MESSAGE(result.status != ExecStatus::Error, result.error_message);
        return *extract_final_answer(result);
    };

    CHECK(answer("final_answer = len(\"abc\")\n").as_number() == 3.0);
    CHECK(answer("final_answer = min([3, 1, 2])\n").as_number() == 1.0);
    CHECK(answer("final_answer = max(3, 1, 2)\n").as_number() == 3.0);
    CHECK(answer("final_answer = abs(-2.5)\n").as_number() == 2.5);
    CHECK(answer("final_answer = int(2.9)\n").as_number() == 2.0);
    CHECK(answer("final_answer = int(-2.9)\n").as_number() == -2.0);
    CHECK(answer("final_answer = round(2.5)\n").as_number() == 3.0);
    CHECK(answer("final_answer = float(\"1.5\")\n").as_number() == 1.5);
    CHECK(answer("final_answer = sum([1, 2, 3.5])\n").as_number() == 6.5);
    CHECK(answer("final_answer = str(3.0)\n").as_text() == "3");
    CHECK(answer("final_answer = str(2.5)\n").as_text() == "2.5");
    CHECK(answer("final_answer = len(range(2, 9, 3))\n").as_number() == 3.0);
    CHECK(answer("final_answer = sorted([3, 1, 2])[0]\n").as_number() == 1.0);
    CHECK(answer("xs = sorted([\"b\", \"a\"])\nfinal_answer = xs[0]\n").as_text() == "a");
    CHECK(answer("def neg(x):\n    return -x\n"
                 "final_answer = max([1, 5, 3], key=neg)\n")
              .as_number() == 1.0);
    CHECK(answer("pairs = enumerate([\"a\", \"b\"])\n"
                 "i, v = pairs[1]\n"
                 "final_answer = i\n")
              .as_number() == 1.0);
}

TEST_CASE("text methods") {
    tools::DummyToolProvider provider;
    auto answer = [&](const std::string& src) {
        const auto result = run_source(src, provider, "img");
        REQUIRE_MESSAGE(result.status != ExecStatus::Error, result.error_message);
        return *extract_final_answer(result);
    };
    CHECK(answer("final_answer = \"AbC\".lower()\n").as_text() == "abc");
    CHECK(answer("final_answer = \"AbC\".upper()\n").as_text() == "ABC");
    CHECK(answer("final_answer = \"  x \".strip()\n").as_text() == "x");
    CHECK(answer("final_answer = len(\"a b  c\".split())\n").as_number() == 3.0);
    CHECK(answer("final_answer = \"a,b\".split(\",\")[1]\n").as_text() == "b");
    CHECK(answer("final_answer = \"yes\" in \"Yes sir\".lower()\n").as_bool());
}

TEST_CASE("membership and comparisons") {
    tools::DummyToolProvider provider;
    auto answer = [&](const std::string& src) {
        const auto result = run_source(src, provider, "img");
        REQUIRE_MESSAGE(result.status != ExecStatus::Error, result.error_message);
        return *extract_final_answer(result);
    };
    CHECK(answer("final_answer = 2 in [1, 2, 3]\n").as_bool());
    CHECK(answer("final_answer = 5 not in [1, 2, 3]\n").as_bool());
    CHECK(answer("final_answer = \"a\" in {\"a\": 1}\n").as_bool());
    CHECK(answer("x = None\nfinal_answer = x is None\n").as_bool());
    CHECK(answer("x = 1\nfinal_answer = x is not None\n").as_bool());
    CHECK(answer("final_answer = [1, 2] == [1, 2]\n").as_bool());
    CHECK_FALSE(answer("final_answer = 1 == \"1\"\n").as_bool());
}

TEST_CASE("unpack mismatch is a type error") {
    tools::DummyToolProvider provider;
    const auto result = run_source("a, b = [1, 2, 3]\n", provider, "img");
    CHECK(result.error == ErrorKind::TypeMismatch);
}

TEST_CASE("grounding call collection") {
    const auto raw = toolprog::parse_llm_output(test::golden_raw(1));
    const auto calls = collect_grounding_calls(toolprog::parse_program(raw.code));
    REQUIRE(calls.prompts.size() == 1);
    CHECK(calls.prompts[0] == "two-seat sofa, dining table");
    CHECK(calls.dynamic_count == 0);

    const auto none = collect_grounding_calls(toolprog::parse_program("final_answer = 1\n"));
    CHECK(none.prompts.empty());
    CHECK(none.dynamic_count == 0);

    const auto dynamic = collect_grounding_calls(
        toolprog::parse_program("p = \"cat\"\nd = gd_detect(img_pth, p)\n"));
    CHECK(dynamic.prompts.empty());
    CHECK(dynamic.dynamic_count == 1);

    // source order across several calls
    const auto multi = collect_grounding_calls(toolprog::parse_program(
        "a = gd_detect(img_pth, \"washing machine\")\nb = gd_detect(img_pth, \"chair\")\n"));
    REQUIRE(multi.prompts.size() == 2);
    CHECK(multi.prompts[0] == "washing machine");
    CHECK(multi.prompts[1] == "chair");
}

TEST_CASE("pure loop of 1e5 steps stays under a second") {
    tools::DummyToolProvider provider;
    Budget budget;
    budget.max_steps = 100000;
    const auto started = std::chrono::steady_clock::now();
    const auto result = run_source(
        "total = 0\nwhile True:\n    total += 1\n", provider, "img", budget);
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - started)
                        .count();
    CHECK(result.error == ErrorKind::BudgetExceededSteps);
    CHECK(ms < 1000);
}
