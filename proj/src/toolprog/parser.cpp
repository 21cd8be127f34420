#include <set>

#include "valor/toolprog/ast.hpp"

namespace valor::toolprog {

namespace {

const std::set<std::string> kTextMethods = {"lower", "upper", "strip", "split"};

class Parser {
  public:
    explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

    ToolProgram run() {
        ToolProgram prog;
        skip_newlines();
        while (!check(TokenType::EndMarker)) {
            prog.statements.push_back(statement());
            skip_newlines();
        }
        return prog;
    }

  private:
    const Token& peek(std::size_t ahead = 0) const {
        const std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
        return toks_[i];
    }

    bool check(TokenType t) const { return peek().type == t; }

    bool match(TokenType t) {
        if (!check(t)) return false;
        ++pos_;
        return true;
    }

    const Token& expect(TokenType t, const std::string& what) {
        if (!check(t)) {
            throw ParseError("expected " + what + ", found " +
                                 token_type_name(peek().type),
                             peek().span, what);
        }
        return toks_[pos_++];
    }

    void skip_newlines() {
        while (match(TokenType::Newline)) {
        }
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg, peek().span);
    }

    // ---- statements ----

    StmtPtr statement() {
        const Span start = peek().span;
        switch (peek().type) {
            case TokenType::KwIf: return if_statement();
            case TokenType::KwFor: return for_statement();
            case TokenType::KwWhile: return while_statement();
            case TokenType::KwDef: return def_statement();
            case TokenType::KwReturn: {
                ++pos_;
                ExprPtr value;
                if (!check(TokenType::Newline) && !check(TokenType::EndMarker)) {
                    value = expression();
                }
                end_of_statement();
                return make_stmt(start, Return{std::move(value)});
            }
            case TokenType::KwBreak:
                ++pos_;
                end_of_statement();
                return make_stmt(start, Break{});
            case TokenType::KwContinue:
                ++pos_;
                end_of_statement();
                return make_stmt(start, Continue{});
            default:
                return simple_statement();
        }
    }

    void end_of_statement() {
        if (check(TokenType::EndMarker)) return;
        expect(TokenType::Newline, "end of statement");
    }

    // assignment, augmented assignment, or bare expression
    StmtPtr simple_statement() {
        const Span start = peek().span;

        // Unpacking target list: NAME (',' NAME)+ '='
        if (check(TokenType::Name) && peek(1).type == TokenType::Comma) {
            std::vector<std::string> targets;
            std::size_t save = pos_;
            targets.push_back(expect(TokenType::Name, "a name").text);
            bool is_unpack = true;
            while (match(TokenType::Comma)) {
                if (!check(TokenType::Name)) {
                    is_unpack = false;
                    break;
                }
                targets.push_back(toks_[pos_++].text);
            }
            if (is_unpack && match(TokenType::Assign)) {
                ExprPtr value = expression();
                end_of_statement();
                return make_stmt(start, Assign{std::move(targets), std::move(value)});
            }
            pos_ = save;
            fail("a comma-separated list is only valid as an unpacking assignment target");
        }

        ExprPtr first = expression();
        if (check(TokenType::Assign)) {
            const auto* name = std::get_if<NameRef>(&first->node);
            if (name == nullptr) {
                fail("only names can be assigned to");
            }
            ++pos_;
            ExprPtr value = expression();
            end_of_statement();
            return make_stmt(start,
                             Assign{std::vector<std::string>{name->name}, std::move(value)});
        }
        if (check(TokenType::PlusAssign) || check(TokenType::MinusAssign) ||
            check(TokenType::StarAssign) || check(TokenType::SlashAssign)) {
            const auto* name = std::get_if<NameRef>(&first->node);
            if (name == nullptr) {
                fail("augmented assignment target must be a name");
            }
            BinaryOp op = BinaryOp::Add;
            switch (peek().type) {
                case TokenType::PlusAssign: op = BinaryOp::Add; break;
                case TokenType::MinusAssign: op = BinaryOp::Sub; break;
                case TokenType::StarAssign: op = BinaryOp::Mul; break;
                default: op = BinaryOp::Div; break;
            }
            ++pos_;
            ExprPtr value = expression();
            end_of_statement();
            return make_stmt(start, AugAssign{name->name, op, std::move(value)});
        }
        end_of_statement();
        return make_stmt(start, ExprStmt{std::move(first)});
    }

    std::vector<StmtPtr> block() {
        expect(TokenType::Colon, "':'");
        expect(TokenType::Newline, "a newline before an indented block");
        skip_newlines();
        expect(TokenType::Indent, "an indented block");
        std::vector<StmtPtr> body;
        skip_newlines();
        while (!check(TokenType::Dedent) && !check(TokenType::EndMarker)) {
            body.push_back(statement());
            skip_newlines();
        }
        expect(TokenType::Dedent, "end of block");
        return body;
    }

    StmtPtr if_statement() {
        const Span start = peek().span;
        expect(TokenType::KwIf, "'if'");
        If node;
        {
            If::Arm arm;
            arm.cond = expression();
            arm.body = block();
            node.arms.push_back(std::move(arm));
        }
        while (check(TokenType::KwElif)) {
            ++pos_;
            If::Arm arm;
            arm.cond = expression();
            arm.body = block();
            node.arms.push_back(std::move(arm));
        }
        if (match(TokenType::KwElse)) {
            node.orelse = block();
        }
        return make_stmt(start, std::move(node));
    }

    StmtPtr for_statement() {
        const Span start = peek().span;
        expect(TokenType::KwFor, "'for'");
        std::vector<std::string> targets;
        targets.push_back(expect(TokenType::Name, "a loop variable").text);
        while (match(TokenType::Comma)) {
            targets.push_back(expect(TokenType::Name, "a loop variable").text);
        }
        expect(TokenType::KwIn, "'in'");
        ExprPtr iterable = expression();
        For node{std::move(targets), std::move(iterable), block()};
        return make_stmt(start, std::move(node));
    }

    StmtPtr while_statement() {
        const Span start = peek().span;
        expect(TokenType::KwWhile, "'while'");
        ExprPtr cond = expression();
        While node{std::move(cond), block()};
        return make_stmt(start, std::move(node));
    }

    StmtPtr def_statement() {
        const Span start = peek().span;
        expect(TokenType::KwDef, "'def'");
        FuncDef node;
        node.name = expect(TokenType::Name, "a function name").text;
        expect(TokenType::LParen, "'('");
        if (!check(TokenType::RParen)) {
            node.params.push_back(expect(TokenType::Name, "a parameter name").text);
            while (match(TokenType::Comma)) {
                node.params.push_back(expect(TokenType::Name, "a parameter name").text);
            }
        }
        expect(TokenType::RParen, "')'");
        node.body = block();
        return make_stmt(start, std::move(node));
    }

    // ---- expressions (precedence climbing) ----

    ExprPtr expression() { return or_expr(); }

    ExprPtr or_expr() {
        ExprPtr lhs = and_expr();
        while (check(TokenType::KwOr)) {
            const Span s = peek().span;
            ++pos_;
            ExprPtr rhs = and_expr();
            lhs = make_expr(s, BoolExpr{BoolOp::Or, std::move(lhs), std::move(rhs)});
        }
        return lhs;
    }

    ExprPtr and_expr() {
        ExprPtr lhs = not_expr();
        while (check(TokenType::KwAnd)) {
            const Span s = peek().span;
            ++pos_;
            ExprPtr rhs = not_expr();
            lhs = make_expr(s, BoolExpr{BoolOp::And, std::move(lhs), std::move(rhs)});
        }
        return lhs;
    }

    ExprPtr not_expr() {
        if (check(TokenType::KwNot) && peek(1).type != TokenType::KwIn) {
            const Span s = peek().span;
            ++pos_;
            return make_expr(s, Unary{UnaryOp::Not, not_expr()});
        }
        return comparison();
    }

    ExprPtr comparison() {
        ExprPtr lhs = additive();
        const Span s = peek().span;
        CompareOp op;
        switch (peek().type) {
            case TokenType::Lt: op = CompareOp::Lt; break;
            case TokenType::Le: op = CompareOp::Le; break;
            case TokenType::Gt: op = CompareOp::Gt; break;
            case TokenType::Ge: op = CompareOp::Ge; break;
            case TokenType::Eq: op = CompareOp::Eq; break;
            case TokenType::Ne: op = CompareOp::Ne; break;
            case TokenType::KwIn: op = CompareOp::In; break;
            case TokenType::KwIs:
                op = peek(1).type == TokenType::KwNot ? CompareOp::IsNot : CompareOp::Is;
                if (op == CompareOp::IsNot) ++pos_;
                break;
            case TokenType::KwNot:
                if (peek(1).type != TokenType::KwIn) return lhs;
                ++pos_;
                op = CompareOp::NotIn;
                break;
            default:
                return lhs;
        }
        ++pos_;
        ExprPtr rhs = additive();
        if (is_comparator(peek().type)) {
            fail("chained comparisons are not supported");
        }
        return make_expr(s, Compare{op, std::move(lhs), std::move(rhs)});
    }

    static bool is_comparator(TokenType t) {
        switch (t) {
            case TokenType::Lt:
            case TokenType::Le:
            case TokenType::Gt:
            case TokenType::Ge:
            case TokenType::Eq:
            case TokenType::Ne:
            case TokenType::KwIn:
            case TokenType::KwIs:
                return true;
            default:
                return false;
        }
    }

    ExprPtr additive() {
        ExprPtr lhs = multiplicative();
        while (check(TokenType::Plus) || check(TokenType::Minus)) {
            const Span s = peek().span;
            const BinaryOp op = peek().type == TokenType::Plus ? BinaryOp::Add : BinaryOp::Sub;
            ++pos_;
            ExprPtr rhs = multiplicative();
            lhs = make_expr(s, Binary{op, std::move(lhs), std::move(rhs)});
        }
        return lhs;
    }

    ExprPtr multiplicative() {
        ExprPtr lhs = unary();
        while (check(TokenType::Star) || check(TokenType::Slash) ||
               check(TokenType::DoubleSlash) || check(TokenType::Percent)) {
            const Span s = peek().span;
            BinaryOp op = BinaryOp::Mul;
            switch (peek().type) {
                case TokenType::Star: op = BinaryOp::Mul; break;
                case TokenType::Slash: op = BinaryOp::Div; break;
                case TokenType::DoubleSlash: op = BinaryOp::FloorDiv; break;
                default: op = BinaryOp::Mod; break;
            }
            ++pos_;
            ExprPtr rhs = unary();
            lhs = make_expr(s, Binary{op, std::move(lhs), std::move(rhs)});
        }
        return lhs;
    }

    ExprPtr unary() {
        if (check(TokenType::Minus)) {
            const Span s = peek().span;
            ++pos_;
            return make_expr(s, Unary{UnaryOp::Neg, unary()});
        }
        if (check(TokenType::Plus)) {
            ++pos_;
            return unary();
        }
        return postfix();
    }

    ExprPtr postfix() {
        ExprPtr e = atom();
        while (true) {
            if (check(TokenType::LBracket)) {
                const Span s = peek().span;
                ++pos_;
                ExprPtr index = expression();
                expect(TokenType::RBracket, "']'");
                e = make_expr(s, Subscript{std::move(e), std::move(index)});
                continue;
            }
            if (check(TokenType::Dot)) {
                const Span s = peek().span;
                ++pos_;
                const std::string method = expect(TokenType::Name, "a method name").text;
                if (kTextMethods.count(method) == 0) {
                    throw ParseError("unsupported method '." + method +
                                         "'; text values support lower/upper/strip/split",
                                     s);
                }
                expect(TokenType::LParen, "'('");
                std::vector<ExprPtr> args;
                if (!check(TokenType::RParen)) {
                    args.push_back(expression());
                    while (match(TokenType::Comma)) {
                        args.push_back(expression());
                    }
                }
                expect(TokenType::RParen, "')'");
                e = make_expr(s, MethodCall{std::move(e), method, std::move(args)});
                continue;
            }
            if (check(TokenType::LParen)) {
                const auto* name = std::get_if<NameRef>(&e->node);
                if (name == nullptr) {
                    fail("only named functions can be called");
                }
                const Span s = peek().span;
                ++pos_;
                Call call;
                call.callee = name->name;
                if (!check(TokenType::RParen)) {
                    call.args.push_back(call_arg());
                    while (match(TokenType::Comma)) {
                        call.args.push_back(call_arg());
                    }
                }
                expect(TokenType::RParen, "')'");
                e = make_expr(s, std::move(call));
                continue;
            }
            break;
        }
        return e;
    }

    CallArg call_arg() {
        if (check(TokenType::Name) && peek(1).type == TokenType::Assign) {
            const std::string kw = peek().text;
            if (kw != "key") {
                throw ParseError("unsupported keyword argument '" + kw +
                                     "'; only key= is accepted",
                                 peek().span);
            }
            pos_ += 2;
            return CallArg{kw, expression()};
        }
        return CallArg{"", expression()};
    }

    ExprPtr atom() {
        const Token& t = peek();
        switch (t.type) {
            case TokenType::Number:
                ++pos_;
                return make_expr(t.span, NumberLit{t.number});
            case TokenType::String:
                ++pos_;
                return make_expr(t.span, TextLit{t.text});
            case TokenType::KwTrue:
                ++pos_;
                return make_expr(t.span, BoolLit{true});
            case TokenType::KwFalse:
                ++pos_;
                return make_expr(t.span, BoolLit{false});
            case TokenType::KwNone:
                ++pos_;
                return make_expr(t.span, NoneLit{});
            case TokenType::Name:
                ++pos_;
                return make_expr(t.span, NameRef{t.text});
            case TokenType::LParen: {
                ++pos_;
                ExprPtr inner = expression();
                expect(TokenType::RParen, "')'");
                return inner;
            }
            case TokenType::LBracket: {
                ++pos_;
                ListLit list;
                if (!check(TokenType::RBracket)) {
                    list.items.push_back(expression());
                    while (match(TokenType::Comma)) {
                        if (check(TokenType::RBracket)) break;  // trailing comma
                        list.items.push_back(expression());
                    }
                }
                expect(TokenType::RBracket, "']'");
                return make_expr(t.span, std::move(list));
            }
            case TokenType::LBrace: {
                ++pos_;
                MapLit map;
                if (!check(TokenType::RBrace)) {
                    map.items.push_back(map_item());
                    while (match(TokenType::Comma)) {
                        if (check(TokenType::RBrace)) break;
                        map.items.push_back(map_item());
                    }
                }
                expect(TokenType::RBrace, "'}'");
                return make_expr(t.span, std::move(map));
            }
            default:
                throw ParseError(std::string("expected an expression, found ") +
                                     token_type_name(t.type),
                                 t.span, "expression");
        }
    }

    std::pair<ExprPtr, ExprPtr> map_item() {
        ExprPtr key = expression();
        expect(TokenType::Colon, "':'");
        ExprPtr value = expression();
        return {std::move(key), std::move(value)};
    }

    template <typename Node>
    static ExprPtr make_expr(Span s, Node&& n) {
        auto e = std::make_unique<Expr>();
        e->span = s;
        e->node = std::forward<Node>(n);
        return e;
    }

    template <typename Node>
    static StmtPtr make_stmt(Span s, Node&& n) {
        auto st = std::make_unique<Stmt>();
        st->span = s;
        st->node = std::forward<Node>(n);
        return st;
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

}  // namespace

ToolProgram parse_program(const std::string& source) {
    return Parser(tokenize(source)).run();
}

}  // namespace valor::toolprog
