#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "zeroml/ast.hpp"
#include "zeroml/lexer.hpp"

namespace zeroml {

class ParseError : public std::runtime_error {
public:
    ParseError(int line, int col, std::string expected, std::string found);
    int line() const { return line_; }
    int col() const { return col_; }
    const std::string& expected() const { return expected_; }
    const std::string& found() const { return found_; }
private:
    int line_;
    int col_;
    std::string expected_;
    std::string found_;
};

/// Parses a whole token stream (must end with Eof). Stops at the first error.
Program parse_program(std::span<const Token> tokens);

/// Parses one expression starting at `*cursor`, consuming operators whose
/// precedence is at least `min_precedence`. Advances `*cursor` past it.
ExprPtr parse_expression(std::span<const Token> tokens, std::size_t* cursor, int min_precedence = 1);

/// tokenize + parse_program.
Program parse_source(std::string_view source);

}  // namespace zeroml
