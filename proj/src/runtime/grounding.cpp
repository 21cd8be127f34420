#include "valor/runtime/grounding.hpp"

namespace valor::runtime {

namespace {

using namespace toolprog;

class Collector {
  public:
    GroundingCalls run(const ToolProgram& prog) {
        walk_body(prog.statements);
        return std::move(out_);
    }

  private:
    void walk_body(const std::vector<StmtPtr>& body) {
        for (const auto& stmt : body) walk_stmt(*stmt);
    }

    void walk_stmt(const Stmt& stmt) {
        std::visit([&](const auto& node) { walk(node); }, stmt.node);
    }

    void walk(const Assign& s) { walk_expr(*s.value); }
    void walk(const AugAssign& s) { walk_expr(*s.value); }
    void walk(const ExprStmt& s) { walk_expr(*s.expr); }
    void walk(const If& s) {
        for (const auto& arm : s.arms) {
            walk_expr(*arm.cond);
            walk_body(arm.body);
        }
        walk_body(s.orelse);
    }
    void walk(const For& s) {
        walk_expr(*s.iterable);
        walk_body(s.body);
    }
    void walk(const While& s) {
        walk_expr(*s.cond);
        walk_body(s.body);
    }
    void walk(const FuncDef& s) { walk_body(s.body); }
    void walk(const Return& s) {
        if (s.value) walk_expr(*s.value);
    }
    void walk(const Break&) {}
    void walk(const Continue&) {}

    void walk_expr(const Expr& e) {
        std::visit([&](const auto& node) { walk_node(node); }, e.node);
    }

    void walk_node(const NumberLit&) {}
    void walk_node(const TextLit&) {}
    void walk_node(const BoolLit&) {}
    void walk_node(const NoneLit&) {}
    void walk_node(const ListLit& l) {
        for (const auto& item : l.items) walk_expr(*item);
    }
    void walk_node(const MapLit& m) {
        for (const auto& [k, v] : m.items) {
            walk_expr(*k);
            walk_expr(*v);
        }
    }
    void walk_node(const NameRef&) {}
    void walk_node(const Subscript& s) {
        walk_expr(*s.object);
        walk_expr(*s.index);
    }
    void walk_node(const Call& c) {
        if (c.callee == "gd_detect") {
            const TextLit* prompt = nullptr;
            for (const auto& arg : c.args) {
                if (const auto* lit = std::get_if<TextLit>(&arg.value->node)) {
                    prompt = lit;
                    break;
                }
            }
            if (prompt != nullptr) {
                out_.prompts.push_back(prompt->value);
            } else {
                ++out_.dynamic_count;
            }
        }
        for (const auto& arg : c.args) walk_expr(*arg.value);
    }
    void walk_node(const MethodCall& m) {
        walk_expr(*m.object);
        for (const auto& arg : m.args) walk_expr(*arg);
    }
    void walk_node(const Unary& u) { walk_expr(*u.operand); }
    void walk_node(const Binary& b) {
        walk_expr(*b.lhs);
        walk_expr(*b.rhs);
    }
    void walk_node(const BoolExpr& b) {
        walk_expr(*b.lhs);
        walk_expr(*b.rhs);
    }
    void walk_node(const Compare& c) {
        walk_expr(*c.lhs);
        walk_expr(*c.rhs);
    }

    GroundingCalls out_;
};

}  // namespace

GroundingCalls collect_grounding_calls(const toolprog::ToolProgram& program) {
    return Collector().run(program);
}

}  // namespace valor::runtime
