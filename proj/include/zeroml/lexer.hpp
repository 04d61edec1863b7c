#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace zeroml {

enum class TokenKind {
    Let, If, Else, For, In,
    Ident, IntLit, FloatLit, StringLit, BoolLit,
    Plus, Minus, Star, Slash,
    Eq, EqEq, Neq, Lt, Gt, Le, Ge,
    LParen, RParen, LBrace, RBrace, Comma, Semi, Dot,
    Eof,
};

/// Upper-case kind name as used by `zeroml tokens` (e.g. "INT_LIT").
std::string_view token_kind_name(TokenKind kind);

struct Token {
    TokenKind kind = TokenKind::Eof;
    std::string lexeme;   // exact source bytes
    int line = 1;
    int col = 1;
    std::size_t offset = 0;
};

class LexError : public std::runtime_error {
public:
    LexError(int line, int col, const std::string& message)
        : std::runtime_error(message), line_(line), col_(col) {}
    int line() const { return line_; }
    int col() const { return col_; }
private:
    int line_;
    int col_;
};

/// Splits source into tokens. The result always ends with exactly one Eof token.
/// Throws LexError on the first byte that cannot start or continue a token.
std::vector<Token> tokenize(std::string_view source);

/// Decodes the body of a string literal lexeme (quotes included) into its value.
std::string unescape_string_literal(std::string_view lexeme);

/// Produces a string literal lexeme for `value`.
std::string escape_string_literal(std::string_view value);

}  // namespace zeroml
