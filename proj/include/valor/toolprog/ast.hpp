#pragma once

#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "valor/toolprog/token.hpp"

namespace valor::toolprog {

struct Expr;
struct Stmt;
using ExprPtr = std::unique_ptr<Expr>;
using StmtPtr = std::unique_ptr<Stmt>;

enum class BinaryOp { Add, Sub, Mul, Div, FloorDiv, Mod };
enum class UnaryOp { Neg, Not };
enum class BoolOp { And, Or };
enum class CompareOp { Lt, Le, Gt, Ge, Eq, Ne, Is, IsNot, In, NotIn };

struct NumberLit { double value = 0; };
struct TextLit { std::string value; };
struct BoolLit { bool value = false; };
struct NoneLit {};
struct ListLit { std::vector<ExprPtr> items; };
struct MapLit { std::vector<std::pair<ExprPtr, ExprPtr>> items; };
struct NameRef { std::string name; };
struct Subscript { ExprPtr object; ExprPtr index; };

struct CallArg {
    std::string keyword;  // empty for positional; grammar only admits "key"
    ExprPtr value;
};
struct Call {
    std::string callee;
    std::vector<CallArg> args;
};

// Text methods only; the parser pins the method-name set.
struct MethodCall {
    ExprPtr object;
    std::string method;
    std::vector<ExprPtr> args;
};

struct Unary { UnaryOp op; ExprPtr operand; };
struct Binary { BinaryOp op; ExprPtr lhs; ExprPtr rhs; };
struct BoolExpr { BoolOp op; ExprPtr lhs; ExprPtr rhs; };
struct Compare { CompareOp op; ExprPtr lhs; ExprPtr rhs; };

struct Expr {
    Span span;
    std::variant<NumberLit, TextLit, BoolLit, NoneLit, ListLit, MapLit, NameRef,
                 Subscript, Call, MethodCall, Unary, Binary, BoolExpr, Compare>
        node;
};

struct Assign {
    std::vector<std::string> targets;  // >1 means unpack of a list value
    ExprPtr value;
};
struct AugAssign {
    std::string target;
    BinaryOp op;  // Add/Sub/Mul/Div
    ExprPtr value;
};
struct ExprStmt { ExprPtr expr; };
struct If {
    struct Arm {
        ExprPtr cond;
        std::vector<StmtPtr> body;
    };
    std::vector<Arm> arms;          // if + elif*
    std::vector<StmtPtr> orelse;    // may be empty
};
struct For {
    std::vector<std::string> targets;
    ExprPtr iterable;
    std::vector<StmtPtr> body;
};
struct While {
    ExprPtr cond;
    std::vector<StmtPtr> body;
};
struct FuncDef {
    std::string name;
    std::vector<std::string> params;
    std::vector<StmtPtr> body;
};
struct Return { ExprPtr value; };  // null for bare `return`
struct Break {};
struct Continue {};

struct Stmt {
    Span span;
    std::variant<Assign, AugAssign, ExprStmt, If, For, While, FuncDef, Return,
                 Break, Continue>
        node;
};

struct ToolProgram {
    std::vector<StmtPtr> statements;
};

struct ParseError : std::runtime_error {
    Span span;
    std::string expected;
    ParseError(const std::string& msg, Span s, std::string exp = "")
        : std::runtime_error(msg), span(s), expected(std::move(exp)) {}
};

ToolProgram parse_program(const std::string& source);

// Structural equality, spans ignored. Round-trip tests live on this.
bool equal(const ToolProgram& a, const ToolProgram& b);
bool equal(const Expr& a, const Expr& b);
bool equal(const Stmt& a, const Stmt& b);

}  // namespace valor::toolprog
