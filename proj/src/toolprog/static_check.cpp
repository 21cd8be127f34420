#include "valor/toolprog/static_check.hpp"

#include <set>

namespace valor::toolprog {

const std::vector<std::string>& tool_function_names() {
    static const std::vector<std::string> names = {"gd_detect", "depth", "vqa"};
    return names;
}

const std::vector<std::string>& builtin_function_names() {
    static const std::vector<std::string> names = {
        "len", "min", "max", "abs", "float", "int", "round",
        "sum", "sorted", "range", "enumerate", "str"};
    return names;
}

namespace {

struct Scope {
    std::set<std::string> bound;      // every name this scope may bind
    const Scope* parent = nullptr;

    bool resolves(const std::string& name) const {
        for (const Scope* s = this; s != nullptr; s = s->parent) {
            if (s->bound.count(name)) return true;
        }
        return false;
    }
};

class Checker {
  public:
    std::vector<Diagnostic> run(const ToolProgram& prog) {
        for (const auto& n : tool_function_names()) globals_.insert(n);
        for (const auto& n : builtin_function_names()) globals_.insert(n);
        callables_ = globals_;

        Scope top;
        top.bound.insert("img_pth");
        collect_bindings(prog.statements, top.bound);

        bool binds_final_answer = false;
        for (const auto& name : top.bound) {
            if (name == "final_answer") binds_final_answer = true;
        }

        check_body(prog.statements, top, /*loop_depth=*/0);

        if (!binds_final_answer) {
            diags_.push_back({Severity::Warning,
                              "final_answer is never assigned on any path",
                              prog.statements.empty() ? Span{} : prog.statements.front()->span});
        }
        return std::move(diags_);
    }

  private:
    // Flow-insensitive: a name is resolvable if anything in the scope binds it.
    void collect_bindings(const std::vector<StmtPtr>& body, std::set<std::string>& bound) {
        for (const auto& stmt : body) {
            std::visit([&](const auto& node) { collect_stmt(node, bound); }, stmt->node);
        }
    }

    void collect_stmt(const Assign& s, std::set<std::string>& bound) {
        for (const auto& t : s.targets) bound.insert(t);
    }
    void collect_stmt(const AugAssign& s, std::set<std::string>& bound) { bound.insert(s.target); }
    void collect_stmt(const ExprStmt&, std::set<std::string>&) {}
    void collect_stmt(const If& s, std::set<std::string>& bound) {
        for (const auto& arm : s.arms) collect_bindings(arm.body, bound);
        collect_bindings(s.orelse, bound);
    }
    void collect_stmt(const For& s, std::set<std::string>& bound) {
        for (const auto& t : s.targets) bound.insert(t);
        collect_bindings(s.body, bound);
    }
    void collect_stmt(const While& s, std::set<std::string>& bound) {
        collect_bindings(s.body, bound);
    }
    void collect_stmt(const FuncDef& s, std::set<std::string>& bound) {
        bound.insert(s.name);
        callables_.insert(s.name);
        // params/locals are collected when the def body is checked
    }
    void collect_stmt(const Return&, std::set<std::string>&) {}
    void collect_stmt(const Break&, std::set<std::string>&) {}
    void collect_stmt(const Continue&, std::set<std::string>&) {}

    void check_body(const std::vector<StmtPtr>& body, const Scope& scope, int loop_depth) {
        for (const auto& stmt : body) {
            std::visit([&](const auto& node) { check_stmt(node, stmt->span, scope, loop_depth); },
                       stmt->node);
        }
    }

    void check_stmt(const Assign& s, Span, const Scope& scope, int) {
        check_expr(*s.value, scope);
    }
    void check_stmt(const AugAssign& s, Span span, const Scope& scope, int) {
        if (!scope.resolves(s.target)) {
            error(span, "name '" + s.target + "' is never bound on any path");
        }
        check_expr(*s.value, scope);
    }
    void check_stmt(const ExprStmt& s, Span, const Scope& scope, int) {
        check_expr(*s.expr, scope);
    }
    void check_stmt(const If& s, Span, const Scope& scope, int loop_depth) {
        for (const auto& arm : s.arms) {
            check_expr(*arm.cond, scope);
            check_body(arm.body, scope, loop_depth);
        }
        check_body(s.orelse, scope, loop_depth);
    }
    void check_stmt(const For& s, Span, const Scope& scope, int loop_depth) {
        check_expr(*s.iterable, scope);
        check_body(s.body, scope, loop_depth + 1);
    }
    void check_stmt(const While& s, Span, const Scope& scope, int loop_depth) {
        check_expr(*s.cond, scope);
        check_body(s.body, scope, loop_depth + 1);
    }
    void check_stmt(const FuncDef& s, Span, const Scope& scope, int) {
        Scope inner;
        inner.parent = &scope;
        for (const auto& p : s.params) inner.bound.insert(p);
        collect_bindings(s.body, inner.bound);
        check_body(s.body, inner, /*loop_depth=*/0);
    }
    void check_stmt(const Return& s, Span, const Scope& scope, int) {
        if (s.value) check_expr(*s.value, scope);
    }
    void check_stmt(const Break&, Span span, const Scope&, int loop_depth) {
        if (loop_depth == 0) error(span, "break outside a loop");
    }
    void check_stmt(const Continue&, Span span, const Scope&, int loop_depth) {
        if (loop_depth == 0) error(span, "continue outside a loop");
    }

    void check_expr(const Expr& e, const Scope& scope) {
        std::visit([&](const auto& node) { check_node(node, e.span, scope); }, e.node);
    }

    void check_node(const NumberLit&, Span, const Scope&) {}
    void check_node(const TextLit&, Span, const Scope&) {}
    void check_node(const BoolLit&, Span, const Scope&) {}
    void check_node(const NoneLit&, Span, const Scope&) {}
    void check_node(const ListLit& l, Span, const Scope& scope) {
        for (const auto& item : l.items) check_expr(*item, scope);
    }
    void check_node(const MapLit& m, Span, const Scope& scope) {
        for (const auto& [k, v] : m.items) {
            check_expr(*k, scope);
            check_expr(*v, scope);
        }
    }
    void check_node(const NameRef& n, Span span, const Scope& scope) {
        if (!scope.resolves(n.name) && globals_.count(n.name) == 0) {
            error(span, "name '" + n.name + "' is never bound on any path");
        }
    }
    void check_node(const Subscript& s, Span, const Scope& scope) {
        check_expr(*s.object, scope);
        check_expr(*s.index, scope);
    }
    void check_node(const Call& c, Span span, const Scope& scope) {
        if (callables_.count(c.callee) == 0) {
            error(span, "unknown callable '" + c.callee + "'");
        }
        for (const auto& arg : c.args) check_expr(*arg.value, scope);
    }
    void check_node(const MethodCall& m, Span, const Scope& scope) {
        check_expr(*m.object, scope);
        for (const auto& arg : m.args) check_expr(*arg, scope);
    }
    void check_node(const Unary& u, Span, const Scope& scope) { check_expr(*u.operand, scope); }
    void check_node(const Binary& b, Span, const Scope& scope) {
        check_expr(*b.lhs, scope);
        check_expr(*b.rhs, scope);
    }
    void check_node(const BoolExpr& b, Span, const Scope& scope) {
        check_expr(*b.lhs, scope);
        check_expr(*b.rhs, scope);
    }
    void check_node(const Compare& c, Span, const Scope& scope) {
        check_expr(*c.lhs, scope);
        check_expr(*c.rhs, scope);
    }

    void error(Span span, const std::string& msg) {
        diags_.push_back({Severity::Error, msg, span});
    }

    std::set<std::string> globals_;
    std::set<std::string> callables_;
    std::vector<Diagnostic> diags_;
};

}  // namespace

std::vector<Diagnostic> static_check(const ToolProgram& program) {
    return Checker().run(program);
}

}  // namespace valor::toolprog
