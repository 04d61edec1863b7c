#include "zeroml/ast.hpp"

#include <charconv>
#include <sstream>

#include "zeroml/lexer.hpp"

namespace zeroml {

std::string_view binary_op_symbol(BinaryOp op) {
    switch (op) {
        case BinaryOp::Add: return "+";
        case BinaryOp::Sub: return "-";
        case BinaryOp::Mul: return "*";
        case BinaryOp::Div: return "/";
        case BinaryOp::Eq: return "==";
        case BinaryOp::Neq: return "!=";
        case BinaryOp::Lt: return "<";
        case BinaryOp::Gt: return ">";
        case BinaryOp::Le: return "<=";
        case BinaryOp::Ge: return ">=";
    }
    return "?";
}

int binary_op_precedence(BinaryOp op) {
    switch (op) {
        case BinaryOp::Mul:
        case BinaryOp::Div: return 3;
        case BinaryOp::Add:
        case BinaryOp::Sub: return 2;
        default: return 1;
    }
}

bool is_comparison(BinaryOp op) { return binary_op_precedence(op) == 1; }

std::string format_float_literal(double value) {
    char buf[400];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed);
    std::string s(buf, ptr);
    if (s.find('.') == std::string::npos) s += ".0";
    return s;
}

namespace {

bool args_equal(const std::vector<ExprPtr>& a, const std::vector<ExprPtr>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!structurally_equal(*a[i], *b[i])) return false;
    }
    return true;
}

bool named_equal(const std::vector<NamedArg>& a, const std::vector<NamedArg>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].name != b[i].name || !structurally_equal(*a[i].value, *b[i].value)) return false;
    }
    return true;
}

bool stmts_equal(const std::vector<StmtPtr>& a, const std::vector<StmtPtr>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!structurally_equal(*a[i], *b[i])) return false;
    }
    return true;
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

std::string literal_text(const LiteralValue& v) {
    return std::visit(overloaded{
                          [](std::int64_t i) { return std::to_string(i); },
                          [](double d) { return format_float_literal(d); },
                          [](const std::string& s) { return escape_string_literal(s); },
                          [](bool b) { return std::string(b ? "true" : "false"); },
                      },
                      v);
}

void print_expr(std::ostream& os, const Expr& e);

void print_args(std::ostream& os, const std::vector<ExprPtr>& args, const std::vector<NamedArg>& named) {
    os << '(';
    bool first = true;
    for (const auto& a : args) {
        if (!first) os << ", ";
        first = false;
        print_expr(os, *a);
    }
    for (const auto& n : named) {
        if (!first) os << ", ";
        first = false;
        os << n.name << '=';
        print_expr(os, *n.value);
    }
    os << ')';
}

int expr_precedence(const Expr& e) {
    if (const auto* b = std::get_if<BinaryExpr>(&e.node)) return binary_op_precedence(b->op);
    return 4;
}

void print_expr(std::ostream& os, const Expr& e) {
    std::visit(overloaded{
                   [&](const LiteralExpr& l) { os << literal_text(l.value); },
                   [&](const IdentifierExpr& i) { os << i.name; },
                   [&](const CallExpr& c) {
                       os << c.callee;
                       print_args(os, c.args, c.named_args);
                   },
                   [&](const MethodCallExpr& m) {
                       const bool bare = std::holds_alternative<IdentifierExpr>(m.receiver->node) ||
                                         std::holds_alternative<CallExpr>(m.receiver->node) ||
                                         std::holds_alternative<MethodCallExpr>(m.receiver->node);
                       if (!bare) os << '(';
                       print_expr(os, *m.receiver);
                       if (!bare) os << ')';
                       os << '.' << m.method;
                       print_args(os, m.args, m.named_args);
                   },
                   [&](const BinaryExpr& b) {
                       const int prec = binary_op_precedence(b.op);
                       const bool wrap_lhs = expr_precedence(*b.lhs) < prec;
                       const bool wrap_rhs = expr_precedence(*b.rhs) <= prec;
                       if (wrap_lhs) os << '(';
                       print_expr(os, *b.lhs);
                       if (wrap_lhs) os << ')';
                       os << ' ' << binary_op_symbol(b.op) << ' ';
                       if (wrap_rhs) os << '(';
                       print_expr(os, *b.rhs);
                       if (wrap_rhs) os << ')';
                   },
               },
               e.node);
}

void print_stmts(std::ostream& os, const std::vector<StmtPtr>& stmts, int depth);

void print_block(std::ostream& os, const Block& b, int depth) {
    os << "{\n";
    print_stmts(os, b.statements, depth + 1);
    os << std::string(4 * depth, ' ') << '}';
}

void print_stmt(std::ostream& os, const Stmt& s, int depth) {
    os << std::string(4 * depth, ' ');
    std::visit(overloaded{
                   [&](const LetDecl& d) {
                       os << "let " << d.name << " = ";
                       print_expr(os, *d.init);
                       os << ';';
                   },
                   [&](const IfElse& i) {
                       os << "if (";
                       print_expr(os, *i.cond);
                       os << ") ";
                       print_block(os, i.then_block, depth);
                       if (i.else_block) {
                           os << " else ";
                           print_block(os, *i.else_block, depth);
                       }
                   },
                   [&](const ForLoop& f) {
                       os << "for (" << f.var << " in ";
                       print_expr(os, *f.iterable);
                       os << ") ";
                       print_block(os, f.body, depth);
                   },
                   [&](const ExprStmt& e) {
                       print_expr(os, *e.expr);
                       os << ';';
                   },
               },
               s.node);
    os << '\n';
}

void print_stmts(std::ostream& os, const std::vector<StmtPtr>& stmts, int depth) {
    for (const auto& s : stmts) print_stmt(os, *s, depth);
}

std::string span_text(const Span& s) {
    std::ostringstream os;
    os << '@' << s.begin.line << ':' << s.begin.col << '-' << s.end.line << ':' << s.end.col;
    return os.str();
}

void dump_expr(std::ostream& os, const Expr& e, int depth, const std::string& label = {});

void dump_args(std::ostream& os, const std::vector<ExprPtr>& args, const std::vector<NamedArg>& named,
               int depth) {
    for (const auto& a : args) dump_expr(os, *a, depth);
    for (const auto& n : named) dump_expr(os, *n.value, depth, n.name + "=");
}

void dump_expr(std::ostream& os, const Expr& e, int depth, const std::string& label) {
    os << std::string(2 * depth, ' ') << label;
    std::visit(overloaded{
                   [&](const LiteralExpr& l) {
                       static constexpr const char* kinds[] = {"Int", "Float", "Text", "Bool"};
                       os << "Literal " << kinds[l.value.index()] << ' ' << literal_text(l.value) << ' '
                          << span_text(e.span) << '\n';
                   },
                   [&](const IdentifierExpr& i) { os << "Identifier " << i.name << ' ' << span_text(e.span) << '\n'; },
                   [&](const CallExpr& c) {
                       os << "Call " << c.callee << ' ' << span_text(e.span) << '\n';
                       dump_args(os, c.args, c.named_args, depth + 1);
                   },
                   [&](const MethodCallExpr& m) {
                       os << "MethodCall ." << m.method << ' ' << span_text(e.span) << '\n';
                       dump_expr(os, *m.receiver, depth + 1, "receiver: ");
                       dump_args(os, m.args, m.named_args, depth + 1);
                   },
                   [&](const BinaryExpr& b) {
                       os << "BinaryOp " << binary_op_symbol(b.op) << ' ' << span_text(e.span) << '\n';
                       dump_expr(os, *b.lhs, depth + 1);
                       dump_expr(os, *b.rhs, depth + 1);
                   },
               },
               e.node);
}

void dump_stmts(std::ostream& os, const std::vector<StmtPtr>& stmts, int depth);

void dump_block(std::ostream& os, const Block& b, int depth, const char* label) {
    os << std::string(2 * depth, ' ') << label << "Block " << span_text(b.span) << '\n';
    dump_stmts(os, b.statements, depth + 1);
}

void dump_stmt(std::ostream& os, const Stmt& s, int depth) {
    const std::string pad(2 * depth, ' ');
    std::visit(overloaded{
                   [&](const LetDecl& d) {
                       os << pad << "LetDecl " << d.name << ' ' << span_text(s.span) << '\n';
                       dump_expr(os, *d.init, depth + 1);
                   },
                   [&](const IfElse& i) {
                       os << pad << "IfThenElse " << span_text(s.span) << '\n';
                       dump_expr(os, *i.cond, depth + 1, "cond: ");
                       dump_block(os, i.then_block, depth + 1, "then: ");
                       if (i.else_block) dump_block(os, *i.else_block, depth + 1, "else: ");
                   },
                   [&](const ForLoop& f) {
                       os << pad << "ForLoop " << f.var << ' ' << span_text(s.span) << '\n';
                       dump_expr(os, *f.iterable, depth + 1, "in: ");
                       dump_block(os, f.body, depth + 1, "body: ");
                   },
                   [&](const ExprStmt& e) {
                       os << pad << "ExprStmt " << span_text(s.span) << '\n';
                       dump_expr(os, *e.expr, depth + 1);
                   },
               },
               s.node);
}

void dump_stmts(std::ostream& os, const std::vector<StmtPtr>& stmts, int depth) {
    for (const auto& s : stmts) dump_stmt(os, *s, depth);
}

}  // namespace

bool structurally_equal(const Expr& a, const Expr& b) {
    if (a.node.index() != b.node.index()) return false;
    return std::visit(
        overloaded{
            [&](const LiteralExpr& l) {
                const auto& r = std::get<LiteralExpr>(b.node);
                return l.value == r.value;
            },
            [&](const IdentifierExpr& l) { return l.name == std::get<IdentifierExpr>(b.node).name; },
            [&](const CallExpr& l) {
                const auto& r = std::get<CallExpr>(b.node);
                return l.callee == r.callee && args_equal(l.args, r.args) && named_equal(l.named_args, r.named_args);
            },
            [&](const MethodCallExpr& l) {
                const auto& r = std::get<MethodCallExpr>(b.node);
                return l.method == r.method && structurally_equal(*l.receiver, *r.receiver) &&
                       args_equal(l.args, r.args) && named_equal(l.named_args, r.named_args);
            },
            [&](const BinaryExpr& l) {
                const auto& r = std::get<BinaryExpr>(b.node);
                return l.op == r.op && structurally_equal(*l.lhs, *r.lhs) && structurally_equal(*l.rhs, *r.rhs);
            },
        },
        a.node);
}

bool structurally_equal(const Stmt& a, const Stmt& b) {
    if (a.node.index() != b.node.index()) return false;
    return std::visit(
        overloaded{
            [&](const LetDecl& l) {
                const auto& r = std::get<LetDecl>(b.node);
                return l.name == r.name && structurally_equal(*l.init, *r.init);
            },
            [&](const IfElse& l) {
                const auto& r = std::get<IfElse>(b.node);
                if (l.else_block.has_value() != r.else_block.has_value()) return false;
                if (l.else_block && !stmts_equal(l.else_block->statements, r.else_block->statements)) {
                    return false;
                }
                return structurally_equal(*l.cond, *r.cond) &&
                       stmts_equal(l.then_block.statements, r.then_block.statements);
            },
            [&](const ForLoop& l) {
                const auto& r = std::get<ForLoop>(b.node);
                return l.var == r.var && structurally_equal(*l.iterable, *r.iterable) &&
                       stmts_equal(l.body.statements, r.body.statements);
            },
            [&](const ExprStmt& l) { return structurally_equal(*l.expr, *std::get<ExprStmt>(b.node).expr); },
        },
        a.node);
}

bool structurally_equal(const Program& a, const Program& b) { return stmts_equal(a.statements, b.statements); }

std::string pretty_print(const Program& program) {
    std::ostringstream os;
    print_stmts(os, program.statements, 0);
    return os.str();
}

std::string pretty_print(const Expr& expr) {
    std::ostringstream os;
    print_expr(os, expr);
    return os.str();
}

std::string dump_tree(const Program& program) {
    std::ostringstream os;
    os << "Program " << program.statements.size() << " statement(s)\n";
    dump_stmts(os, program.statements, 1);
    return os.str();
}

}  // namespace zeroml
