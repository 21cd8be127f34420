#include "valor/toolprog/token.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <map>

namespace valor::toolprog {

const char* token_type_name(TokenType t) {
    switch (t) {
        case TokenType::Name: return "name";
        case TokenType::Number: return "number";
        case TokenType::String: return "string";
        case TokenType::Newline: return "newline";
        case TokenType::Indent: return "indent";
        case TokenType::Dedent: return "dedent";
        case TokenType::EndMarker: return "end of input";
        case TokenType::KwIf: return "'if'";
        case TokenType::KwElif: return "'elif'";
        case TokenType::KwElse: return "'else'";
        case TokenType::KwFor: return "'for'";
        case TokenType::KwWhile: return "'while'";
        case TokenType::KwDef: return "'def'";
        case TokenType::KwReturn: return "'return'";
        case TokenType::KwBreak: return "'break'";
        case TokenType::KwContinue: return "'continue'";
        case TokenType::KwIn: return "'in'";
        case TokenType::KwIs: return "'is'";
        case TokenType::KwNot: return "'not'";
        case TokenType::KwAnd: return "'and'";
        case TokenType::KwOr: return "'or'";
        case TokenType::KwTrue: return "'True'";
        case TokenType::KwFalse: return "'False'";
        case TokenType::KwNone: return "'None'";
        case TokenType::Assign: return "'='";
        case TokenType::PlusAssign: return "'+='";
        case TokenType::MinusAssign: return "'-='";
        case TokenType::StarAssign: return "'*='";
        case TokenType::SlashAssign: return "'/='";
        case TokenType::Plus: return "'+'";
        case TokenType::Minus: return "'-'";
        case TokenType::Star: return "'*'";
        case TokenType::Slash: return "'/'";
        case TokenType::DoubleSlash: return "'//'";
        case TokenType::Percent: return "'%'";
        case TokenType::Lt: return "'<'";
        case TokenType::Le: return "'<='";
        case TokenType::Gt: return "'>'";
        case TokenType::Ge: return "'>='";
        case TokenType::Eq: return "'=='";
        case TokenType::Ne: return "'!='";
        case TokenType::LParen: return "'('";
        case TokenType::RParen: return "')'";
        case TokenType::LBracket: return "'['";
        case TokenType::RBracket: return "']'";
        case TokenType::LBrace: return "'{'";
        case TokenType::RBrace: return "'}'";
        case TokenType::Comma: return "','";
        case TokenType::Colon: return "':'";
        case TokenType::Dot: return "'.'";
    }
    return "?";
}

namespace {

const std::map<std::string, TokenType> kKeywords = {
    {"if", TokenType::KwIf},         {"elif", TokenType::KwElif},
    {"else", TokenType::KwElse},     {"for", TokenType::KwFor},
    {"while", TokenType::KwWhile},   {"def", TokenType::KwDef},
    {"return", TokenType::KwReturn}, {"break", TokenType::KwBreak},
    {"continue", TokenType::KwContinue}, {"in", TokenType::KwIn},
    {"is", TokenType::KwIs},         {"not", TokenType::KwNot},
    {"and", TokenType::KwAnd},       {"or", TokenType::KwOr},
    {"True", TokenType::KwTrue},     {"False", TokenType::KwFalse},
    {"None", TokenType::KwNone},
};

class Lexer {
  public:
    explicit Lexer(const std::string& src) : src_(src) {}

    std::vector<Token> run() {
        indent_stack_.push_back(0);
        while (pos_ < src_.size()) {
            if (at_line_start_ && bracket_depth_ == 0) {
                handle_indentation();
                if (pos_ >= src_.size()) break;
            }
            lex_one();
        }
        if (!tokens_.empty() && tokens_.back().type != TokenType::Newline &&
            bracket_depth_ == 0) {
            emit(TokenType::Newline, "", here());
        }
        while (indent_stack_.back() > 0) {
            indent_stack_.pop_back();
            emit(TokenType::Dedent, "", here());
        }
        emit(TokenType::EndMarker, "", here());
        return std::move(tokens_);
    }

  private:
    Span here() const { return {static_cast<int>(pos_), static_cast<int>(pos_), line_, col_}; }

    Span span_from(std::size_t begin, int line, int col) const {
        return {static_cast<int>(begin), static_cast<int>(pos_), line, col};
    }

    void emit(TokenType t, std::string text, Span s, double num = 0) {
        tokens_.push_back(Token{t, std::move(text), num, s});
    }

    char peek(std::size_t ahead = 0) const {
        return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
    }

    char advance() {
        const char c = src_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    // Measures leading whitespace of a logical line and emits Indent/Dedent.
    // A line may indent with spaces or tabs but the whole program must pick
    // one; mixing kinds is the "inconsistent indentation" lex error.
    void handle_indentation() {
        while (pos_ < src_.size()) {
            const std::size_t line_begin = pos_;
            const int line_no = line_;
            const int col_no = col_;
            int width = 0;
            char kind = '\0';
            while (peek() == ' ' || peek() == '\t') {
                const char c = advance();
                if (kind == '\0') kind = c;
                if (c != kind) {
                    throw LexError("inconsistent indentation: mixed tabs and spaces",
                                   span_from(line_begin, line_no, col_no));
                }
                ++width;
            }
            if (peek() == '#') {
                while (pos_ < src_.size() && peek() != '\n') advance();
            }
            if (peek() == '\n') {  // blank or comment-only line
                advance();
                continue;
            }
            if (pos_ >= src_.size()) return;
            if (kind != '\0') {
                if (indent_kind_ == '\0') {
                    indent_kind_ = kind;
                } else if (kind != indent_kind_) {
                    throw LexError("inconsistent indentation: mixed tabs and spaces across lines",
                                   span_from(line_begin, line_no, col_no));
                }
            }
            if (width > indent_stack_.back()) {
                indent_stack_.push_back(width);
                emit(TokenType::Indent, "", span_from(line_begin, line_no, col_no));
            } else {
                while (width < indent_stack_.back()) {
                    indent_stack_.pop_back();
                    emit(TokenType::Dedent, "", span_from(line_begin, line_no, col_no));
                }
                if (width != indent_stack_.back()) {
                    throw LexError("inconsistent indentation: dedent to unknown level",
                                   span_from(line_begin, line_no, col_no));
                }
            }
            at_line_start_ = false;
            return;
        }
    }

    void lex_one() {
        const char c = peek();
        const std::size_t begin = pos_;
        const int line_no = line_;
        const int col_no = col_;

        if (c == '\n') {
            advance();
            if (bracket_depth_ == 0) {
                if (!tokens_.empty() && tokens_.back().type != TokenType::Newline &&
                    tokens_.back().type != TokenType::Indent &&
                    tokens_.back().type != TokenType::Dedent) {
                    emit(TokenType::Newline, "", span_from(begin, line_no, col_no));
                }
                at_line_start_ = true;
            }
            return;
        }
        if (c == ' ' || c == '\t' || c == '\r') {
            advance();
            return;
        }
        if (c == '#') {
            while (pos_ < src_.size() && peek() != '\n') advance();
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string word;
            while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') {
                word.push_back(advance());
            }
            const auto it = kKeywords.find(word);
            if (it != kKeywords.end()) {
                emit(it->second, word, span_from(begin, line_no, col_no));
            } else {
                emit(TokenType::Name, word, span_from(begin, line_no, col_no));
            }
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
            lex_number(begin, line_no, col_no);
            return;
        }
        if (c == '"' || c == '\'') {
            lex_string(begin, line_no, col_no);
            return;
        }
        lex_operator(begin, line_no, col_no);
    }

    void lex_number(std::size_t begin, int line_no, int col_no) {
        std::string text;
        while (std::isdigit(static_cast<unsigned char>(peek()))) text.push_back(advance());
        if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
            text.push_back(advance());
            while (std::isdigit(static_cast<unsigned char>(peek()))) text.push_back(advance());
        } else if (peek() == '.' && !std::isalpha(static_cast<unsigned char>(peek(1))) &&
                   peek(1) != '_') {
            // trailing dot as in "2." — keep, but not before an attribute name
            text.push_back(advance());
        }
        if (peek() == 'e' || peek() == 'E') {
            const char e = peek();
            const char sign = peek(1);
            if (std::isdigit(static_cast<unsigned char>(sign)) ||
                ((sign == '+' || sign == '-') &&
                 std::isdigit(static_cast<unsigned char>(peek(2))))) {
                text.push_back(advance());
                if (peek() == '+' || peek() == '-') text.push_back(advance());
                while (std::isdigit(static_cast<unsigned char>(peek()))) text.push_back(advance());
            }
            (void)e;
        }
        emit(TokenType::Number, text, span_from(begin, line_no, col_no),
             std::strtod(text.c_str(), nullptr));
    }

    void lex_string(std::size_t begin, int line_no, int col_no) {
        const char quote = advance();
        std::string value;
        while (true) {
            if (pos_ >= src_.size() || peek() == '\n') {
                throw LexError("unterminated string", span_from(begin, line_no, col_no));
            }
            const char c = advance();
            if (c == quote) break;
            if (c == '\\') {
                if (pos_ >= src_.size()) {
                    throw LexError("unterminated string", span_from(begin, line_no, col_no));
                }
                const char esc = advance();
                switch (esc) {
                    case 'n': value.push_back('\n'); break;
                    case 't': value.push_back('\t'); break;
                    case 'r': value.push_back('\r'); break;
                    case '\\': value.push_back('\\'); break;
                    case '\'': value.push_back('\''); break;
                    case '"': value.push_back('"'); break;
                    default:
                        value.push_back('\\');
                        value.push_back(esc);
                }
            } else {
                value.push_back(c);
            }
        }
        emit(TokenType::String, value, span_from(begin, line_no, col_no));
    }

    void lex_operator(std::size_t begin, int line_no, int col_no) {
        const char c = advance();
        const char n = peek();
        TokenType t;
        bool two = false;
        switch (c) {
            case '=': t = n == '=' ? (two = true, TokenType::Eq) : TokenType::Assign; break;
            case '+': t = n == '=' ? (two = true, TokenType::PlusAssign) : TokenType::Plus; break;
            case '-': t = n == '=' ? (two = true, TokenType::MinusAssign) : TokenType::Minus; break;
            case '*': t = n == '=' ? (two = true, TokenType::StarAssign) : TokenType::Star; break;
            case '/':
                if (n == '=') { two = true; t = TokenType::SlashAssign; }
                else if (n == '/') { two = true; t = TokenType::DoubleSlash; }
                else t = TokenType::Slash;
                break;
            case '%': t = TokenType::Percent; break;
            case '<': t = n == '=' ? (two = true, TokenType::Le) : TokenType::Lt; break;
            case '>': t = n == '=' ? (two = true, TokenType::Ge) : TokenType::Gt; break;
            case '!':
                if (n != '=') {
                    throw LexError("illegal character '!'", span_from(begin, line_no, col_no));
                }
                two = true;
                t = TokenType::Ne;
                break;
            case '(': t = TokenType::LParen; ++bracket_depth_; break;
            case ')': t = TokenType::RParen; bracket_depth_ = std::max(0, bracket_depth_ - 1); break;
            case '[': t = TokenType::LBracket; ++bracket_depth_; break;
            case ']': t = TokenType::RBracket; bracket_depth_ = std::max(0, bracket_depth_ - 1); break;
            case '{': t = TokenType::LBrace; ++bracket_depth_; break;
            case '}': t = TokenType::RBrace; bracket_depth_ = std::max(0, bracket_depth_ - 1); break;
            case ',': t = TokenType::Comma; break;
            case ':': t = TokenType::Colon; break;
            case '.': t = TokenType::Dot; break;
            default:
                throw LexError(std::string("illegal character '") + c + "'",
                               span_from(begin, line_no, col_no));
        }
        if (two) advance();
        emit(t, src_.substr(begin, pos_ - begin), span_from(begin, line_no, col_no));
    }

    const std::string& src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
    bool at_line_start_ = true;
    int bracket_depth_ = 0;
    char indent_kind_ = '\0';
    std::vector<int> indent_stack_;
    std::vector<Token> tokens_;
};

}  // namespace

std::vector<Token> tokenize(const std::string& source) {
    return Lexer(source).run();
}

}  // namespace valor::toolprog
