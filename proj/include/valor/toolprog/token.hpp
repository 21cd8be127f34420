#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace valor::toolprog {

// Byte offsets into the original source plus the 1-based start position.
struct Span {
    int begin = 0;
    int end = 0;
    int line = 1;
    int col = 1;
};

enum class TokenType {
    Name,
    Number,
    String,
    Newline,
    Indent,
    Dedent,
    EndMarker,
    // keywords
    KwIf,
    KwElif,
    KwElse,
    KwFor,
    KwWhile,
    KwDef,
    KwReturn,
    KwBreak,
    KwContinue,
    KwIn,
    KwIs,
    KwNot,
    KwAnd,
    KwOr,
    KwTrue,
    KwFalse,
    KwNone,
    // punctuation / operators
    Assign,
    PlusAssign,
    MinusAssign,
    StarAssign,
    SlashAssign,
    Plus,
    Minus,
    Star,
    Slash,
    DoubleSlash,
    Percent,
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Comma,
    Colon,
    Dot,
};

struct Token {
    TokenType type;
    std::string text;   // raw lexeme (decoded value for String)
    double number = 0;  // for Number
    Span span;
};

struct LexError : std::runtime_error {
    Span span;
    LexError(const std::string& msg, Span s) : std::runtime_error(msg), span(s) {}
};

const char* token_type_name(TokenType t);

// Whole-source tokenization. Indentation becomes Indent/Dedent tokens,
// comments and blank lines disappear, newlines inside brackets are joined.
std::vector<Token> tokenize(const std::string& source);

}  // namespace valor::toolprog
