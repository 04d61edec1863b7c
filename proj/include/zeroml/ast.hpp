#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace zeroml {

struct Pos {
    int line = 1;
    int col = 1;
    friend bool operator==(const Pos&, const Pos&) = default;
};

/// Half-open source range: `end` is the position just past the last byte.
struct Span {
    Pos begin;
    Pos end;
};

enum class BinaryOp { Add, Sub, Mul, Div, Eq, Neq, Lt, Gt, Le, Ge };

std::string_view binary_op_symbol(BinaryOp op);

/// 1 = comparison, 2 = additive, 3 = multiplicative.
int binary_op_precedence(BinaryOp op);

bool is_comparison(BinaryOp op);

using LiteralValue = std::variant<std::int64_t, double, std::string, bool>;

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct NamedArg {
    std::string name;
    ExprPtr value;
    Span span;
};

struct LiteralExpr {
    LiteralValue value;
};

struct IdentifierExpr {
    std::string name;
};

struct CallExpr {
    std::string callee;
    std::vector<ExprPtr> args;
    std::vector<NamedArg> named_args;
};

struct MethodCallExpr {
    ExprPtr receiver;
    std::string method;
    std::vector<ExprPtr> args;
    std::vector<NamedArg> named_args;
};

struct BinaryExpr {
    BinaryOp op;
    ExprPtr lhs;
    ExprPtr rhs;
};

struct Expr {
    std::variant<LiteralExpr, IdentifierExpr, CallExpr, MethodCallExpr, BinaryExpr> node;
    Span span;
    int id = -1;  // dense index assigned by the parser, keys the checker's type table
};

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;

struct Block {
    std::vector<StmtPtr> statements;
    Span span;
};

struct LetDecl {
    std::string name;
    ExprPtr init;
    Span name_span;
};

struct IfElse {
    ExprPtr cond;
    Block then_block;
    std::optional<Block> else_block;
};

struct ForLoop {
    std::string var;
    ExprPtr iterable;
    Block body;
    Span var_span;
};

struct ExprStmt {
    ExprPtr expr;
};

struct Stmt {
    std::variant<LetDecl, IfElse, ForLoop, ExprStmt> node;
    Span span;
};

struct Program {
    std::vector<StmtPtr> statements;
    Span span;
    int expr_count = 0;  // number of Expr ids handed out
};

/// Equality of shape and values, ignoring spans and ids.
bool structurally_equal(const Expr& a, const Expr& b);
bool structurally_equal(const Stmt& a, const Stmt& b);
bool structurally_equal(const Program& a, const Program& b);

/// Canonical source text; re-parses to a structurally equal program.
std::string pretty_print(const Program& program);
std::string pretty_print(const Expr& expr);

/// Indented line-oriented tree dump used by `zeroml ast`.
std::string dump_tree(const Program& program);

/// Shortest round-trip text of a float that always lexes back as FLOAT_LIT.
std::string format_float_literal(double value);

}  // namespace zeroml
