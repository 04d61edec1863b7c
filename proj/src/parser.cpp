#include "zeroml/parser.hpp"

#include <charconv>
#include <set>
#include <utility>

namespace zeroml {

ParseError::ParseError(int line, int col, std::string expected, std::string found)
    : std::runtime_error("expected " + expected + ", found " + found),
      line_(line), col_(col), expected_(std::move(expected)), found_(std::move(found)) {}

namespace {

Pos end_of(const Token& t) {
    // Tokens never span lines except string literals with embedded newlines.
    Pos p{t.line, t.col};
    for (char c : t.lexeme) {
        if (c == '\n') {
            ++p.line;
            p.col = 1;
        } else {
            ++p.col;
        }
    }
    return p;
}

std::string describe(const Token& t) {
    if (t.kind == TokenKind::Eof) return "end of input";
    return std::string(token_kind_name(t.kind)) + " '" + t.lexeme + "'";
}

std::optional<BinaryOp> as_binary_op(TokenKind kind) {
    switch (kind) {
        case TokenKind::Plus: return BinaryOp::Add;
        case TokenKind::Minus: return BinaryOp::Sub;
        case TokenKind::Star: return BinaryOp::Mul;
        case TokenKind::Slash: return BinaryOp::Div;
        case TokenKind::EqEq: return BinaryOp::Eq;
        case TokenKind::Neq: return BinaryOp::Neq;
        case TokenKind::Lt: return BinaryOp::Lt;
        case TokenKind::Gt: return BinaryOp::Gt;
        case TokenKind::Le: return BinaryOp::Le;
        case TokenKind::Ge: return BinaryOp::Ge;
        default: return std::nullopt;
    }
}

class Parser {
public:
    Parser(std::span<const Token> tokens, std::size_t cursor, int first_id)
        : toks_(tokens), pos_(cursor), next_id_(first_id) {
        if (toks_.empty() || toks_.back().kind != TokenKind::Eof) {
            throw ParseError(1, 1, "token stream ending with EOF", "unterminated stream");
        }
    }

    Program program() {
        Program prog;
        prog.span.begin = Pos{1, 1};
        while (!at(TokenKind::Eof)) prog.statements.push_back(statement());
        prog.span.end = Pos{peek().line, peek().col};
        prog.expr_count = next_id_;
        return prog;
    }

    ExprPtr expression(int min_prec) {
        ExprPtr lhs = postfix();
        for (;;) {
            auto op = as_binary_op(peek().kind);
            if (!op || binary_op_precedence(*op) < min_prec) return lhs;
            advance();
            ExprPtr rhs = expression(binary_op_precedence(*op) + 1);
            Span span{lhs->span.begin, rhs->span.end};
            lhs = make_expr(BinaryExpr{*op, std::move(lhs), std::move(rhs)}, span);
        }
    }

    std::size_t cursor() const { return pos_; }
    int ids_used() const { return next_id_; }

private:
    const Token& peek(std::size_t ahead = 0) const {
        return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
    }
    bool at(TokenKind kind) const { return peek().kind == kind; }
    const Token& advance() {
        const Token& t = toks_[pos_];
        if (pos_ + 1 < toks_.size()) ++pos_;
        last_end_ = end_of(t);
        return t;
    }

    [[noreturn]] void fail(const std::string& expected) const {
        const Token& t = peek();
        throw ParseError(t.line, t.col, expected, describe(t));
    }

    const Token& expect(TokenKind kind, const char* what) {
        if (!at(kind)) fail(what);
        return advance();
    }

    template <class Node>
    ExprPtr make_expr(Node node, Span span) {
        auto e = std::make_unique<Expr>();
        e->node = std::move(node);
        e->span = span;
        e->id = next_id_++;
        return e;
    }

    StmtPtr make_stmt(auto node, Pos begin) {
        auto s = std::make_unique<Stmt>();
        s->node = std::move(node);
        s->span = Span{begin, last_end_};
        return s;
    }

    StmtPtr statement() {
        const Pos begin{peek().line, peek().col};
        switch (peek().kind) {
            case TokenKind::Let: {
                advance();
                const Token& name_tok = expect(TokenKind::Ident, "IDENT");
                const Span name_span{Pos{name_tok.line, name_tok.col}, end_of(name_tok)};
                std::string name = name_tok.lexeme;
                expect(TokenKind::Eq, "'='");
                ExprPtr init = expression(1);
                expect(TokenKind::Semi, "';'");
                return make_stmt(LetDecl{std::move(name), std::move(init), name_span}, begin);
            }
            case TokenKind::If: {
                advance();
                expect(TokenKind::LParen, "'('");
                ExprPtr cond = expression(1);
                expect(TokenKind::RParen, "')'");
                Block then_block = block();
                std::optional<Block> else_block;
                if (at(TokenKind::Else)) {
                    advance();
                    else_block = block();
                }
                return make_stmt(IfElse{std::move(cond), std::move(then_block), std::move(else_block)},
                                 begin);
            }
            case TokenKind::For: {
                advance();
                expect(TokenKind::LParen, "'('");
                const Token& var_tok = expect(TokenKind::Ident, "IDENT");
                const Span var_span{Pos{var_tok.line, var_tok.col}, end_of(var_tok)};
                std::string var = var_tok.lexeme;
                expect(TokenKind::In, "'in'");
                ExprPtr iterable = expression(1);
                expect(TokenKind::RParen, "')'");
                Block body = block();
                return make_stmt(ForLoop{std::move(var), std::move(iterable), std::move(body), var_span}, begin);
            }
            default: {
                if (at(TokenKind::Ident) && peek(1).kind == TokenKind::Eq) {
                    // Reassignment is not part of the language; report it precisely.
                    advance();
                    fail("'(' or operator (bindings are immutable; use 'let')");
                }
                ExprPtr e = expression(1);
                // A bare call is a statement on its own; ';' is optional after it.
                const bool is_call = std::holds_alternative<CallExpr>(e->node) ||
                                     std::holds_alternative<MethodCallExpr>(e->node);
                if (at(TokenKind::Semi)) {
                    advance();
                } else if (!is_call) {
                    fail("';'");
                }
                return make_stmt(ExprStmt{std::move(e)}, begin);
            }
        }
    }

    Block block() {
        Block b;
        b.span.begin = Pos{peek().line, peek().col};
        expect(TokenKind::LBrace, "'{'");
        while (!at(TokenKind::RBrace)) {
            if (at(TokenKind::Eof)) fail("'}'");
            b.statements.push_back(statement());
        }
        advance();
        b.span.end = last_end_;
        return b;
    }

    ExprPtr postfix() {
        ExprPtr e = primary();
        while (at(TokenKind::Dot)) {
            advance();
            std::string method = expect(TokenKind::Ident, "method name").lexeme;
            std::vector<ExprPtr> args;
            std::vector<NamedArg> named;
            arguments(args, named);
            Span span{e->span.begin, last_end_};
            e = make_expr(MethodCallExpr{std::move(e), std::move(method), std::move(args), std::move(named)},
                          span);
        }
        return e;
    }

    void arguments(std::vector<ExprPtr>& args, std::vector<NamedArg>& named) {
        expect(TokenKind::LParen, "'('");
        std::set<std::string> seen;
        if (!at(TokenKind::RParen)) {
            for (;;) {
                if (at(TokenKind::Ident) && peek(1).kind == TokenKind::Eq) {
                    const Token& name_tok = advance();
                    if (!seen.insert(name_tok.lexeme).second) {
                        throw ParseError(name_tok.line, name_tok.col, "distinct argument name",
                                         "duplicate named argument '" + name_tok.lexeme + "'");
                    }
                    advance();
                    ExprPtr value = expression(1);
                    Span span{Pos{name_tok.line, name_tok.col}, value->span.end};
                    named.push_back(NamedArg{name_tok.lexeme, std::move(value), span});
                } else {
                    if (!named.empty()) fail("named argument (positional arguments come first)");
                    args.push_back(expression(1));
                }
                if (!at(TokenKind::Comma)) break;
                advance();
            }
        }
        expect(TokenKind::RParen, "')'");
    }

    ExprPtr primary() {
        const Token& t = peek();
        const Pos begin{t.line, t.col};
        switch (t.kind) {
            case TokenKind::IntLit: {
                advance();
                std::int64_t v = 0;
                auto [ptr, ec] = std::from_chars(t.lexeme.data(), t.lexeme.data() + t.lexeme.size(), v);
                if (ec != std::errc{}) {
                    throw ParseError(t.line, t.col, "integer literal in 64-bit range", "'" + t.lexeme + "'");
                }
                return make_expr(LiteralExpr{v}, Span{begin, last_end_});
            }
            case TokenKind::FloatLit: {
                advance();
                double v = 0;
                auto [ptr, ec] = std::from_chars(t.lexeme.data(), t.lexeme.data() + t.lexeme.size(), v);
                if (ec != std::errc{}) {
                    throw ParseError(t.line, t.col, "finite float literal", "'" + t.lexeme + "'");
                }
                return make_expr(LiteralExpr{v}, Span{begin, last_end_});
            }
            case TokenKind::StringLit:
                advance();
                return make_expr(LiteralExpr{unescape_string_literal(t.lexeme)}, Span{begin, last_end_});
            case TokenKind::BoolLit:
                advance();
                return make_expr(LiteralExpr{t.lexeme == "true"}, Span{begin, last_end_});
            case TokenKind::Ident: {
                const Token& name = advance();
                if (!at(TokenKind::LParen)) {
                    return make_expr(IdentifierExpr{name.lexeme}, Span{begin, last_end_});
                }
                std::vector<ExprPtr> args;
                std::vector<NamedArg> named;
                arguments(args, named);
                return make_expr(CallExpr{name.lexeme, std::move(args), std::move(named)},
                                 Span{begin, last_end_});
            }
            case TokenKind::LParen: {
                advance();
                ExprPtr inner = expression(1);
                expect(TokenKind::RParen, "')'");
                inner->span = Span{begin, last_end_};
                return inner;
            }
            default:
                fail("expression");
        }
    }

    std::span<const Token> toks_;
    std::size_t pos_;
    int next_id_;
    Pos last_end_{1, 1};
};

}  // namespace

Program parse_program(std::span<const Token> tokens) { return Parser(tokens, 0, 0).program(); }

ExprPtr parse_expression(std::span<const Token> tokens, std::size_t* cursor, int min_precedence) {
    Parser p(tokens, *cursor, 0);
    ExprPtr e = p.expression(min_precedence);
    *cursor = p.cursor();
    return e;
}

Program parse_source(std::string_view source) {
    auto tokens = tokenize(source);
    return parse_program(tokens);
}

}  // namespace zeroml
