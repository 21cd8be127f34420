#include "valor/toolprog/printer.hpp"

#include <charconv>

namespace valor::toolprog {

namespace {

std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string quote_text(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default: out.push_back(c);
        }
    }
    out.push_back('"');
    return out;
}

// Precedence ladder; larger binds tighter.
constexpr int kPrecOr = 1;
constexpr int kPrecAnd = 2;
constexpr int kPrecNot = 3;
constexpr int kPrecCompare = 4;
constexpr int kPrecAdd = 5;
constexpr int kPrecMul = 6;
constexpr int kPrecUnary = 7;
constexpr int kPrecPostfix = 8;

const char* binary_op_text(BinaryOp op) {
    switch (op) {
        case BinaryOp::Add: return "+";
        case BinaryOp::Sub: return "-";
        case BinaryOp::Mul: return "*";
        case BinaryOp::Div: return "/";
        case BinaryOp::FloorDiv: return "//";
        case BinaryOp::Mod: return "%";
    }
    return "?";
}

const char* compare_op_text(CompareOp op) {
    switch (op) {
        case CompareOp::Lt: return "<";
        case CompareOp::Le: return "<=";
        case CompareOp::Gt: return ">";
        case CompareOp::Ge: return ">=";
        case CompareOp::Eq: return "==";
        case CompareOp::Ne: return "!=";
        case CompareOp::Is: return "is";
        case CompareOp::IsNot: return "is not";
        case CompareOp::In: return "in";
        case CompareOp::NotIn: return "not in";
    }
    return "?";
}

class Printer {
  public:
    std::string run(const ToolProgram& prog) {
        for (const auto& stmt : prog.statements) {
            statement(*stmt, 0);
        }
        return std::move(out_);
    }

  private:
    void line(int indent, const std::string& text) {
        out_.append(static_cast<std::size_t>(indent) * 4, ' ');
        out_ += text;
        out_ += '\n';
    }

    void statement(const Stmt& stmt, int indent) {
        std::visit(
            [&](const auto& node) { emit_stmt(node, indent); },
            stmt.node);
    }

    void emit_stmt(const Assign& s, int indent) {
        std::string text;
        for (std::size_t i = 0; i < s.targets.size(); ++i) {
            if (i) text += ", ";
            text += s.targets[i];
        }
        text += " = " + expr(*s.value, 0);
        line(indent, text);
    }

    void emit_stmt(const AugAssign& s, int indent) {
        line(indent, s.target + " " + binary_op_text(s.op) + "= " + expr(*s.value, 0));
    }

    void emit_stmt(const ExprStmt& s, int indent) { line(indent, expr(*s.expr, 0)); }

    void emit_stmt(const If& s, int indent) {
        for (std::size_t i = 0; i < s.arms.size(); ++i) {
            line(indent, std::string(i == 0 ? "if " : "elif ") + expr(*s.arms[i].cond, 0) + ":");
            body(s.arms[i].body, indent + 1);
        }
        if (!s.orelse.empty()) {
            line(indent, "else:");
            body(s.orelse, indent + 1);
        }
    }

    void emit_stmt(const For& s, int indent) {
        std::string text = "for ";
        for (std::size_t i = 0; i < s.targets.size(); ++i) {
            if (i) text += ", ";
            text += s.targets[i];
        }
        text += " in " + expr(*s.iterable, 0) + ":";
        line(indent, text);
        body(s.body, indent + 1);
    }

    void emit_stmt(const While& s, int indent) {
        line(indent, "while " + expr(*s.cond, 0) + ":");
        body(s.body, indent + 1);
    }

    void emit_stmt(const FuncDef& s, int indent) {
        std::string text = "def " + s.name + "(";
        for (std::size_t i = 0; i < s.params.size(); ++i) {
            if (i) text += ", ";
            text += s.params[i];
        }
        text += "):";
        line(indent, text);
        body(s.body, indent + 1);
    }

    void emit_stmt(const Return& s, int indent) {
        line(indent, s.value ? "return " + expr(*s.value, 0) : "return");
    }

    void emit_stmt(const Break&, int indent) { line(indent, "break"); }
    void emit_stmt(const Continue&, int indent) { line(indent, "continue"); }

    void body(const std::vector<StmtPtr>& stmts, int indent) {
        for (const auto& stmt : stmts) statement(*stmt, indent);
    }

    // min_prec: smallest precedence printable here without parentheses.
    std::string expr(const Expr& e, int min_prec) {
        return std::visit(
            [&](const auto& node) { return emit_expr(node, min_prec); },
            e.node);
    }

    static std::string wrap(std::string text, int prec, int min_prec) {
        if (prec < min_prec) return "(" + std::move(text) + ")";
        return text;
    }

    std::string emit_expr(const NumberLit& n, int) { return format_number(n.value); }
    std::string emit_expr(const TextLit& t, int) { return quote_text(t.value); }
    std::string emit_expr(const BoolLit& b, int) { return b.value ? "True" : "False"; }
    std::string emit_expr(const NoneLit&, int) { return "None"; }
    std::string emit_expr(const NameRef& n, int) { return n.name; }

    std::string emit_expr(const ListLit& l, int) {
        std::string out = "[";
        for (std::size_t i = 0; i < l.items.size(); ++i) {
            if (i) out += ", ";
            out += expr(*l.items[i], 0);
        }
        return out + "]";
    }

    std::string emit_expr(const MapLit& m, int) {
        std::string out = "{";
        for (std::size_t i = 0; i < m.items.size(); ++i) {
            if (i) out += ", ";
            out += expr(*m.items[i].first, 0) + ": " + expr(*m.items[i].second, 0);
        }
        return out + "}";
    }

    std::string emit_expr(const Subscript& s, int min_prec) {
        return wrap(expr(*s.object, kPrecPostfix) + "[" + expr(*s.index, 0) + "]",
                    kPrecPostfix, min_prec);
    }

    std::string emit_expr(const Call& c, int min_prec) {
        std::string out = c.callee + "(";
        for (std::size_t i = 0; i < c.args.size(); ++i) {
            if (i) out += ", ";
            if (!c.args[i].keyword.empty()) out += c.args[i].keyword + "=";
            out += expr(*c.args[i].value, 0);
        }
        return wrap(out + ")", kPrecPostfix, min_prec);
    }

    std::string emit_expr(const MethodCall& m, int min_prec) {
        std::string out = expr(*m.object, kPrecPostfix) + "." + m.method + "(";
        for (std::size_t i = 0; i < m.args.size(); ++i) {
            if (i) out += ", ";
            out += expr(*m.args[i], 0);
        }
        return wrap(out + ")", kPrecPostfix, min_prec);
    }

    std::string emit_expr(const Unary& u, int min_prec) {
        if (u.op == UnaryOp::Not) {
            return wrap("not " + expr(*u.operand, kPrecNot), kPrecNot, min_prec);
        }
        return wrap("-" + expr(*u.operand, kPrecUnary), kPrecUnary, min_prec);
    }

    std::string emit_expr(const Binary& b, int min_prec) {
        const int prec = (b.op == BinaryOp::Add || b.op == BinaryOp::Sub) ? kPrecAdd : kPrecMul;
        return wrap(expr(*b.lhs, prec) + " " + binary_op_text(b.op) + " " +
                        expr(*b.rhs, prec + 1),
                    prec, min_prec);
    }

    std::string emit_expr(const BoolExpr& b, int min_prec) {
        const int prec = b.op == BoolOp::And ? kPrecAnd : kPrecOr;
        return wrap(expr(*b.lhs, prec) + (b.op == BoolOp::And ? " and " : " or ") +
                        expr(*b.rhs, prec + 1),
                    prec, min_prec);
    }

    std::string emit_expr(const Compare& c, int min_prec) {
        return wrap(expr(*c.lhs, kPrecCompare + 1) + " " + compare_op_text(c.op) + " " +
                        expr(*c.rhs, kPrecCompare + 1),
                    kPrecCompare, min_prec);
    }

    std::string out_;
};

}  // namespace

std::string pretty_print(const ToolProgram& program) {
    return Printer().run(program);
}

}  // namespace valor::toolprog
