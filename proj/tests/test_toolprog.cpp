#include "doctest.h"

#include "test_support.hpp"
#include "valor/toolprog/ast.hpp"
#include "valor/toolprog/extract.hpp"
#include "valor/toolprog/printer.hpp"
#include "valor/toolprog/static_check.hpp"
#include "valor/toolprog/token.hpp"

using namespace valor;
using namespace valor::toolprog;

// ---- parse_llm_output ----

TEST_CASE("llm output extraction happy path") {
    const auto out = parse_llm_output("<plan>p</plan><answer>x = 1</answer>");
    REQUIRE(out.ok);
    CHECK(out.plan == "p");
    CHECK(out.code == "x = 1");
}

TEST_CASE("llm output extraction errors") {
    CHECK(parse_llm_output("<plan></plan><answer>x=1</answer>").error ==
          FormatErrorKind::EmptyPlan);
    CHECK(parse_llm_output("<plan>p</plan>").error == FormatErrorKind::MissingAnswer);
    CHECK(parse_llm_output("<answer>x</answer>").error == FormatErrorKind::MissingPlan);
    CHECK(parse_llm_output("<plan>p</plan><answer>   \n\t </answer>").error ==
          FormatErrorKind::EmptyAnswer);
    CHECK(parse_llm_output("<plan>p</plan><answer>x").error == FormatErrorKind::MissingAnswer);
    CHECK(parse_llm_output("").error == FormatErrorKind::MissingPlan);
}

TEST_CASE("llm output takes the first tag pair") {
    const auto out =
        parse_llm_output("<plan>a</plan><plan>b</plan><answer>1</answer><answer>2</answer>");
    REQUIRE(out.ok);
    CHECK(out.plan == "a");
    CHECK(out.code == "1");
}

// ---- tokenize ----

TEST_CASE("tokenize a minimal statement") {
    const auto toks = tokenize("x = 1");
    REQUIRE(toks.size() == 5);  // name assign number newline end
    CHECK(toks[0].type == TokenType::Name);
    CHECK(toks[0].text == "x");
    CHECK(toks[1].type == TokenType::Assign);
    CHECK(toks[2].type == TokenType::Number);
    CHECK(toks[2].number == doctest::Approx(1.0));
    CHECK(toks[3].type == TokenType::Newline);
    CHECK(toks[4].type == TokenType::EndMarker);
}

TEST_CASE("tokenize subscript with string key") {
    const auto toks = tokenize("det[\"bbox\"]");
    REQUIRE(toks.size() >= 4);
    CHECK(toks[0].type == TokenType::Name);
    CHECK(toks[1].type == TokenType::LBracket);
    CHECK(toks[2].type == TokenType::String);
    CHECK(toks[2].text == "bbox");
    CHECK(toks[3].type == TokenType::RBracket);
}

TEST_CASE("mixed tabs and spaces in one indent is a lex error") {
    CHECK_THROWS_AS(tokenize("if True:\n \tx = 1\n"), LexError);
}

TEST_CASE("mixed indent kinds across lines is a lex error") {
    CHECK_THROWS_AS(tokenize("if True:\n    x = 1\nif True:\n\ty = 2\n"), LexError);
}

TEST_CASE("unterminated string and illegal character") {
    CHECK_THROWS_AS(tokenize("x = \"abc"), LexError);
    CHECK_THROWS_AS(tokenize("x = 1 @ 2"), LexError);
}

TEST_CASE("lex errors carry spans inside the source") {
    const std::string src = "x = \"abc";
    try {
        tokenize(src);
        FAIL("expected LexError");
    } catch (const LexError& e) {
        CHECK(e.span.begin >= 0);
        CHECK(e.span.begin <= static_cast<int>(src.size()));
    }
}

TEST_CASE("comments and blank lines disappear") {
    const auto toks = tokenize("# header\n\nx = 1  # trailing\n");
    REQUIRE(toks.size() == 5);
    CHECK(toks[0].text == "x");
}

TEST_CASE("newlines inside brackets are joined") {
    const auto toks = tokenize("x = [1,\n     2]\n");
    for (const auto& t : toks) {
        CHECK(t.type != TokenType::Indent);
    }
    CHECK_NOTHROW(parse_program("x = [1,\n     2]\n"));
}

// ---- parse_program ----

TEST_CASE("empty program parses to zero statements") {
    CHECK(parse_program("").statements.empty());
    CHECK(parse_program("\n\n# only a comment\n").statements.empty());
}

TEST_CASE("malformed conditional is a parse error") {
    CHECK_THROWS_AS(parse_program("if x"), ParseError);
    CHECK_THROWS_AS(parse_program("if x:"), ParseError);
    CHECK_THROWS_AS(parse_program("final_answer = (1"), ParseError);
}

TEST_CASE("parse errors carry spans inside the source") {
    const std::string src = "x = 1 +\n";
    try {
        parse_program(src);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.span.begin >= 0);
        CHECK(e.span.begin <= static_cast<int>(src.size()));
    }
}

TEST_CASE("rejected constructs stay rejected") {
    CHECK_THROWS_AS(parse_program("xs = [i for i in ys]\n"), ParseError);
    CHECK_THROWS_AS(parse_program("import os\n"), ParseError);  // unknown statement shape
    CHECK_THROWS_AS(parse_program("x = ys[1:2]\n"), ParseError);
    CHECK_THROWS_AS(parse_program("class A:\n    x = 1\n"), ParseError);
    CHECK_THROWS_AS(parse_program("x.append(1)\n"), ParseError);
    CHECK_THROWS_AS(parse_program("f(a, b=1)\n"), ParseError);  // only key= is allowed
    CHECK_THROWS_AS(parse_program("x = 1 < 2 < 3\n"), ParseError);
}

TEST_CASE("keyword argument key= parses") {
    const auto prog = parse_program("best = max(xs, key=f)\n");
    REQUIRE(prog.statements.size() == 1);
    const auto& assign = std::get<Assign>(prog.statements[0]->node);
    const auto& call = std::get<Call>(assign.value->node);
    REQUIRE(call.args.size() == 2);
    CHECK(call.args[0].keyword.empty());
    CHECK(call.args[1].keyword == "key");
}

TEST_CASE("unpacking assignment parses") {
    const auto prog = parse_program("a, b, c, d = det[\"bbox\"]\n");
    REQUIRE(prog.statements.size() == 1);
    const auto& assign = std::get<Assign>(prog.statements[0]->node);
    CHECK(assign.targets == std::vector<std::string>{"a", "b", "c", "d"});
}

TEST_CASE("top level return is accepted") {
    const auto prog = parse_program("final_answer = 1\nreturn\n");
    REQUIRE(prog.statements.size() == 2);
    CHECK(std::holds_alternative<Return>(prog.statements[1]->node));
}

static int count_statements(const std::vector<StmtPtr>& body, bool (*pred)(const Stmt&)) {
    int n = 0;
    for (const auto& stmt : body) {
        if (pred(*stmt)) ++n;
        if (const auto* iff = std::get_if<If>(&stmt->node)) {
            for (const auto& arm : iff->arms) n += count_statements(arm.body, pred);
            n += count_statements(iff->orelse, pred);
        } else if (const auto* forl = std::get_if<For>(&stmt->node)) {
            n += count_statements(forl->body, pred);
        } else if (const auto* whl = std::get_if<While>(&stmt->node)) {
            n += count_statements(whl->body, pred);
        } else if (const auto* def = std::get_if<FuncDef>(&stmt->node)) {
            n += count_statements(def->body, pred);
        }
    }
    return n;
}

static int count_calls(const ToolProgram& prog, const std::string& callee);

TEST_CASE("golden corpus parses with the expected shape") {
    for (int i = 1; i <= 5; ++i) {
        const auto raw = parse_llm_output(test::golden_raw(i));
        REQUIRE(raw.ok);
        CHECK_NOTHROW(parse_program(raw.code));
    }

    // the closer-to-camera program: a for loop, two early-return guards,
    // two depth calls, and a trailing if/else
    const auto raw = parse_llm_output(test::golden_raw(2));
    const auto prog = parse_program(raw.code);
    CHECK(count_statements(prog.statements, [](const Stmt& s) {
              return std::holds_alternative<For>(s.node);
          }) == 1);
    CHECK(count_statements(prog.statements, [](const Stmt& s) {
              return std::holds_alternative<If>(s.node);
          }) == 4);  // 2 guards + 1 comparison + 1 inside the loop
    CHECK(count_statements(prog.statements, [](const Stmt& s) {
              return std::holds_alternative<Return>(s.node);
          }) == 2);
    CHECK(count_calls(prog, "depth") == 2);
    CHECK(std::holds_alternative<If>(prog.statements.back()->node));
}

static void count_calls_expr(const Expr& e, const std::string& callee, int& n) {
    if (const auto* call = std::get_if<Call>(&e.node)) {
        if (call->callee == callee) ++n;
        for (const auto& arg : call->args) count_calls_expr(*arg.value, callee, n);
        return;
    }
    if (const auto* sub = std::get_if<Subscript>(&e.node)) {
        count_calls_expr(*sub->object, callee, n);
        count_calls_expr(*sub->index, callee, n);
    } else if (const auto* mc = std::get_if<MethodCall>(&e.node)) {
        count_calls_expr(*mc->object, callee, n);
        for (const auto& a : mc->args) count_calls_expr(*a, callee, n);
    } else if (const auto* u = std::get_if<Unary>(&e.node)) {
        count_calls_expr(*u->operand, callee, n);
    } else if (const auto* b = std::get_if<Binary>(&e.node)) {
        count_calls_expr(*b->lhs, callee, n);
        count_calls_expr(*b->rhs, callee, n);
    } else if (const auto* be = std::get_if<BoolExpr>(&e.node)) {
        count_calls_expr(*be->lhs, callee, n);
        count_calls_expr(*be->rhs, callee, n);
    } else if (const auto* cmp = std::get_if<Compare>(&e.node)) {
        count_calls_expr(*cmp->lhs, callee, n);
        count_calls_expr(*cmp->rhs, callee, n);
    } else if (const auto* list = std::get_if<ListLit>(&e.node)) {
        for (const auto& item : list->items) count_calls_expr(*item, callee, n);
    } else if (const auto* map = std::get_if<MapLit>(&e.node)) {
        for (const auto& [k, v] : map->items) {
            count_calls_expr(*k, callee, n);
            count_calls_expr(*v, callee, n);
        }
    }
}

static void count_calls_body(const std::vector<StmtPtr>& body, const std::string& callee, int& n) {
    for (const auto& stmt : body) {
        if (const auto* a = std::get_if<Assign>(&stmt->node)) {
            count_calls_expr(*a->value, callee, n);
        } else if (const auto* aa = std::get_if<AugAssign>(&stmt->node)) {
            count_calls_expr(*aa->value, callee, n);
        } else if (const auto* es = std::get_if<ExprStmt>(&stmt->node)) {
            count_calls_expr(*es->expr, callee, n);
        } else if (const auto* iff = std::get_if<If>(&stmt->node)) {
            for (const auto& arm : iff->arms) {
                count_calls_expr(*arm.cond, callee, n);
                count_calls_body(arm.body, callee, n);
            }
            count_calls_body(iff->orelse, callee, n);
        } else if (const auto* forl = std::get_if<For>(&stmt->node)) {
            count_calls_expr(*forl->iterable, callee, n);
            count_calls_body(forl->body, callee, n);
        } else if (const auto* whl = std::get_if<While>(&stmt->node)) {
            count_calls_expr(*whl->cond, callee, n);
            count_calls_body(whl->body, callee, n);
        } else if (const auto* def = std::get_if<FuncDef>(&stmt->node)) {
            count_calls_body(def->body, callee, n);
        } else if (const auto* ret = std::get_if<Return>(&stmt->node)) {
            if (ret->value) count_calls_expr(*ret->value, callee, n);
        }
    }
}

static int count_calls(const ToolProgram& prog, const std::string& callee) {
    int n = 0;
    count_calls_body(prog.statements, callee, n);
    return n;
}

// ---- pretty_print ----

TEST_CASE("pretty print canonicalizes spacing") {
    CHECK(pretty_print(parse_program("x=1")) == "x = 1\n");
    CHECK(pretty_print(parse_program("y   =  x+2")) == "y = x + 2\n");
}

TEST_CASE("round trip across the golden corpus") {
    for (int i = 1; i <= 5; ++i) {
        const auto raw = parse_llm_output(test::golden_raw(i));
        REQUIRE(raw.ok);
        const auto first = parse_program(raw.code);
        const auto printed = pretty_print(first);
        const auto second = parse_program(printed);
        CHECK(equal(first, second));
        // printing is a fixed point after one pass
        CHECK(pretty_print(second) == printed);
    }
}

TEST_CASE("round trip preserves nesting and operator structure") {
    const char* src =
        "if a < b:\n"
        "    for x, y in pairs:\n"
        "        total += (x - y) * (x + y)\n"
        "        if total > 100 or x in seen:\n"
        "            break\n"
        "else:\n"
        "    total = -(a + b) / 2\n"
        "vals = {\"k\": [1, 2.5, \"s\"], \"other\": None}\n"
        "flag = not done and x != 3\n";
    const auto first = parse_program(src);
    const auto second = parse_program(pretty_print(first));
    CHECK(equal(first, second));
}

// ---- static_check ----

TEST_CASE("static check accepts resolvable programs") {
    const auto prog = parse_program("final_answer = len(gd_detect(img_pth, \"cat\"))\n");
    CHECK(static_check(prog).empty());
}

TEST_CASE("static check flags unknown callable") {
    const auto prog = parse_program("final_answer = foo(1)\n");
    const auto diags = static_check(prog);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].severity == Severity::Error);
    CHECK(diags[0].message.find("foo") != std::string::npos);
}

TEST_CASE("static check flags never-bound names") {
    const auto prog = parse_program("final_answer = undefined_var + 1\n");
    const auto diags = static_check(prog);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].severity == Severity::Error);
    CHECK(diags[0].message.find("undefined_var") != std::string::npos);
}

TEST_CASE("static check allows names bound later on some path") {
    const auto prog = parse_program("if ready:\n    x = 1\nfinal_answer = x\nready = True\n");
    CHECK(static_check(prog).empty());
}

TEST_CASE("static check flags break/continue outside loops") {
    auto diags = static_check(parse_program("final_answer = 1\nbreak\n"));
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].message.find("break") != std::string::npos);
    diags = static_check(parse_program("final_answer = 1\ncontinue\n"));
    REQUIRE(diags.size() == 1);

    // inside a loop both are fine
    CHECK(static_check(parse_program(
              "final_answer = 0\nfor x in [1]:\n    if x == 1:\n        break\n"))
              .empty());
}

TEST_CASE("static check warns on missing final_answer") {
    const auto diags = static_check(parse_program("x = 1\n"));
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].severity == Severity::Warning);
    CHECK(diags[0].message.find("final_answer") != std::string::npos);
}

TEST_CASE("static check is pure") {
    const auto prog = parse_program("final_answer = foo(bar)\n");
    const auto a = static_check(prog);
    const auto b = static_check(prog);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].message == b[i].message);
        CHECK(a[i].severity == b[i].severity);
    }
}

TEST_CASE("golden corpus is clean under static check") {
    for (int i = 1; i <= 5; ++i) {
        const auto raw = parse_llm_output(test::golden_raw(i));
        const auto prog = parse_program(raw.code);
        CHECK(static_check(prog).empty());
    }
}
