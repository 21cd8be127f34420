#include "valor/toolprog/ast.hpp"

namespace valor::toolprog {

namespace {

bool equal_body(const std::vector<StmtPtr>& a, const std::vector<StmtPtr>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!equal(*a[i], *b[i])) return false;
    }
    return true;
}

bool equal_exprs(const std::vector<ExprPtr>& a, const std::vector<ExprPtr>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!equal(*a[i], *b[i])) return false;
    }
    return true;
}

struct ExprEq {
    const Expr& rhs;

    template <typename T>
    bool operator()(const T& a) const {
        const T* b = std::get_if<T>(&rhs.node);
        return b != nullptr && eq(a, *b);
    }

    static bool eq(const NumberLit& a, const NumberLit& b) { return a.value == b.value; }
    static bool eq(const TextLit& a, const TextLit& b) { return a.value == b.value; }
    static bool eq(const BoolLit& a, const BoolLit& b) { return a.value == b.value; }
    static bool eq(const NoneLit&, const NoneLit&) { return true; }
    static bool eq(const ListLit& a, const ListLit& b) { return equal_exprs(a.items, b.items); }
    static bool eq(const MapLit& a, const MapLit& b) {
        if (a.items.size() != b.items.size()) return false;
        for (std::size_t i = 0; i < a.items.size(); ++i) {
            if (!equal(*a.items[i].first, *b.items[i].first) ||
                !equal(*a.items[i].second, *b.items[i].second)) {
                return false;
            }
        }
        return true;
    }
    static bool eq(const NameRef& a, const NameRef& b) { return a.name == b.name; }
    static bool eq(const Subscript& a, const Subscript& b) {
        return equal(*a.object, *b.object) && equal(*a.index, *b.index);
    }
    static bool eq(const Call& a, const Call& b) {
        if (a.callee != b.callee || a.args.size() != b.args.size()) return false;
        for (std::size_t i = 0; i < a.args.size(); ++i) {
            if (a.args[i].keyword != b.args[i].keyword ||
                !equal(*a.args[i].value, *b.args[i].value)) {
                return false;
            }
        }
        return true;
    }
    static bool eq(const MethodCall& a, const MethodCall& b) {
        return a.method == b.method && equal(*a.object, *b.object) &&
               equal_exprs(a.args, b.args);
    }
    static bool eq(const Unary& a, const Unary& b) {
        return a.op == b.op && equal(*a.operand, *b.operand);
    }
    static bool eq(const Binary& a, const Binary& b) {
        return a.op == b.op && equal(*a.lhs, *b.lhs) && equal(*a.rhs, *b.rhs);
    }
    static bool eq(const BoolExpr& a, const BoolExpr& b) {
        return a.op == b.op && equal(*a.lhs, *b.lhs) && equal(*a.rhs, *b.rhs);
    }
    static bool eq(const Compare& a, const Compare& b) {
        return a.op == b.op && equal(*a.lhs, *b.lhs) && equal(*a.rhs, *b.rhs);
    }
};

struct StmtEq {
    const Stmt& rhs;

    template <typename T>
    bool operator()(const T& a) const {
        const T* b = std::get_if<T>(&rhs.node);
        return b != nullptr && eq(a, *b);
    }

    static bool eq(const Assign& a, const Assign& b) {
        return a.targets == b.targets && equal(*a.value, *b.value);
    }
    static bool eq(const AugAssign& a, const AugAssign& b) {
        return a.target == b.target && a.op == b.op && equal(*a.value, *b.value);
    }
    static bool eq(const ExprStmt& a, const ExprStmt& b) { return equal(*a.expr, *b.expr); }
    static bool eq(const If& a, const If& b) {
        if (a.arms.size() != b.arms.size()) return false;
        for (std::size_t i = 0; i < a.arms.size(); ++i) {
            if (!equal(*a.arms[i].cond, *b.arms[i].cond) ||
                !equal_body(a.arms[i].body, b.arms[i].body)) {
                return false;
            }
        }
        return equal_body(a.orelse, b.orelse);
    }
    static bool eq(const For& a, const For& b) {
        return a.targets == b.targets && equal(*a.iterable, *b.iterable) &&
               equal_body(a.body, b.body);
    }
    static bool eq(const While& a, const While& b) {
        return equal(*a.cond, *b.cond) && equal_body(a.body, b.body);
    }
    static bool eq(const FuncDef& a, const FuncDef& b) {
        return a.name == b.name && a.params == b.params && equal_body(a.body, b.body);
    }
    static bool eq(const Return& a, const Return& b) {
        if ((a.value == nullptr) != (b.value == nullptr)) return false;
        return a.value == nullptr || equal(*a.value, *b.value);
    }
    static bool eq(const Break&, const Break&) { return true; }
    static bool eq(const Continue&, const Continue&) { return true; }
};

}  // namespace

bool equal(const Expr& a, const Expr& b) {
    return std::visit(ExprEq{b}, a.node);
}

bool equal(const Stmt& a, const Stmt& b) {
    return std::visit(StmtEq{b}, a.node);
}

bool equal(const ToolProgram& a, const ToolProgram& b) {
    return equal_body(a.statements, b.statements);
}

}  // namespace valor::toolprog
