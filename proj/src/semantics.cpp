#include "zeroml/semantics.hpp"

#include <algorithm>

namespace zeroml {

std::string_view sem_code_name(SemCode code) {
    switch (code) {
        case SemCode::Redecl: return "E_REDECL";
        case SemCode::Undef: return "E_UNDEF";
        case SemCode::Type: return "E_TYPE";
        case SemCode::Arg: return "E_ARG";
        case SemCode::NoMut: return "E_NOMUT";
    }
    return "E_?";
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

std::string quoted(ZType t) { return std::string(type_name(t)); }

class Checker {
public:
    explicit Checker(TypedProgram& out) : out_(out) {
        const auto n = static_cast<std::size_t>(out_.ast.expr_count);
        out_.type_of.assign(n, ZType::Invalid);
        out_.resolved.assign(n, -1);
        out_.calls.assign(n, std::nullopt);
    }

    std::vector<SemError> run() {
        scopes_.emplace_back();
        for (const auto& s : out_.ast.statements) statement(*s);
        scopes_.pop_back();
        std::stable_sort(errors_.begin(), errors_.end(), [](const SemError& a, const SemError& b) {
            return a.line != b.line ? a.line < b.line : a.col < b.col;
        });
        return std::move(errors_);
    }

private:
    void error(SemCode code, Pos at, std::string message) {
        errors_.push_back(SemError{code, at.line, at.col, std::move(message)});
    }

    void declare(const Stmt& s, const std::string& name, ZType type, Span span) {
        auto& scope = scopes_.back();
        if (auto it = scope.find(name); it != scope.end()) {
            const Symbol& prev = out_.symbols[static_cast<std::size_t>(it->second)];
            error(SemCode::Redecl, span.begin,
                  "'" + name + "' is already declared in this scope (line " +
                      std::to_string(prev.declared_at.begin.line) + "); bindings are immutable");
            return;
        }
        const int index = static_cast<int>(out_.symbols.size());
        out_.symbols.push_back(Symbol{name, type, span, static_cast<int>(scopes_.size()) - 1});
        out_.declared[&s] = index;
        scope.emplace(name, index);
    }

    const Symbol* lookup(const std::string& name, int* index) const {
        for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
            if (auto found = it->find(name); found != it->end()) {
                *index = found->second;
                return &out_.symbols[static_cast<std::size_t>(found->second)];
            }
        }
        return nullptr;
    }

    void block(const Block& b) {
        scopes_.emplace_back();
        for (const auto& s : b.statements) statement(*s);
        scopes_.pop_back();
    }

    void statement(const Stmt& s) {
        std::visit(overloaded{
                       [&](const LetDecl& d) {
                           const ZType t = expr(*d.init);
                           declare(s, d.name, t == ZType::Invalid ? ZType::Invalid : t, d.name_span);
                       },
                       [&](const IfElse& i) {
                           const ZType c = expr(*i.cond);
                           if (c != ZType::Invalid && c != ZType::Bool) {
                               error(SemCode::Type, i.cond->span.begin,
                                     "if condition must be Bool, found " + quoted(c));
                           }
                           block(i.then_block);
                           if (i.else_block) block(*i.else_block);
                       },
                       [&](const ForLoop& f) {
                           const ZType it = expr(*f.iterable);
                           if (it != ZType::Invalid && it != ZType::Range) {
                               error(SemCode::Type, f.iterable->span.begin,
                                     "for loop iterates over a Range, found " + quoted(it));
                           }
                           // The loop variable shares the body's scope.
                           scopes_.emplace_back();
                           declare(s, f.var, ZType::Int, f.var_span);
                           for (const auto& inner : f.body.statements) statement(*inner);
                           scopes_.pop_back();
                       },
                       [&](const ExprStmt& e) { expr(*e.expr); },
                   },
                   s.node);
    }

    ZType set(const Expr& e, ZType t) {
        out_.type_of[static_cast<std::size_t>(e.id)] = t;
        return t;
    }

    ZType expr(const Expr& e) {
        return std::visit(
            overloaded{
                [&](const LiteralExpr& l) {
                    static constexpr ZType kinds[] = {ZType::Int, ZType::Float, ZType::Text, ZType::Bool};
                    return set(e, kinds[l.value.index()]);
                },
                [&](const IdentifierExpr& i) {
                    int index = -1;
                    const Symbol* sym = lookup(i.name, &index);
                    if (!sym) {
                        std::string hint = find_builtin(i.name) ? " ('" + i.name + "' is a function; call it)" : "";
                        error(SemCode::Undef, e.span.begin, "unknown identifier '" + i.name + "'" + hint);
                        return set(e, ZType::Invalid);
                    }
                    out_.resolved[static_cast<std::size_t>(e.id)] = index;
                    return set(e, sym->type);
                },
                [&](const CallExpr& c) {
                    const BuiltinSignature* sig = find_builtin(c.callee);
                    if (!sig) {
                        for (const auto& a : c.args) expr(*a);
                        for (const auto& n : c.named_args) expr(*n.value);
                        error(SemCode::Undef, e.span.begin, "unknown function '" + c.callee + "'");
                        return set(e, ZType::Invalid);
                    }
                    std::vector<const Expr*> positional;
                    for (const auto& a : c.args) positional.push_back(a.get());
                    return set(e, bind(e, *sig, positional, c.named_args));
                },
                [&](const MethodCallExpr& m) {
                    const ZType recv = expr(*m.receiver);
                    const BuiltinSignature* sig = find_builtin(m.method);
                    if (!sig || !sig->method_form) {
                        for (const auto& a : m.args) expr(*a);
                        for (const auto& n : m.named_args) expr(*n.value);
                        error(SemCode::Undef, e.span.begin,
                              "unknown method '" + m.method + "'" +
                                  (recv == ZType::Invalid ? "" : " on " + quoted(recv)));
                        return set(e, ZType::Invalid);
                    }
                    std::vector<const Expr*> positional{m.receiver.get()};
                    for (const auto& a : m.args) positional.push_back(a.get());
                    return set(e, bind(e, *sig, positional, m.named_args, /*receiver_checked=*/true));
                },
                [&](const BinaryExpr& b) { return set(e, binary(e, b)); },
            },
            e.node);
    }

    ZType bind(const Expr& call, const BuiltinSignature& sig, const std::vector<const Expr*>& positional,
               const std::vector<NamedArg>& named, bool receiver_checked = false) {
        bool ok = true;
        CallBinding binding{sig.id, std::vector<const Expr*>(sig.params.size(), nullptr)};
        std::vector<ZType> arg_types;
        for (std::size_t i = 0; i < positional.size(); ++i) {
            arg_types.push_back(receiver_checked && i == 0 ? out_.type_of[static_cast<std::size_t>(positional[0]->id)]
                                                           : expr(*positional[i]));
        }
        if (positional.size() > sig.params.size()) {
            error(SemCode::Arg, call.span.begin,
                  "'" + sig.name + "' takes at most " + std::to_string(sig.params.size()) + " argument(s), got " +
                      std::to_string(positional.size()));
            ok = false;
        }
        for (std::size_t i = 0; i < positional.size() && i < sig.params.size(); ++i) {
            binding.args[i] = positional[i];
            check_arg(sig, sig.params[i], *positional[i], arg_types[i], ok);
        }
        for (const auto& n : named) {
            const ZType t = expr(*n.value);
            auto it = std::find_if(sig.params.begin(), sig.params.end(),
                                   [&](const BuiltinParam& p) { return p.name == n.name; });
            if (it == sig.params.end()) {
                error(SemCode::Arg, n.span.begin, "'" + sig.name + "' has no parameter named '" + n.name + "'");
                ok = false;
                continue;
            }
            const auto idx = static_cast<std::size_t>(it - sig.params.begin());
            if (binding.args[idx]) {
                error(SemCode::Arg, n.span.begin, "parameter '" + n.name + "' of '" + sig.name + "' given twice");
                ok = false;
                continue;
            }
            binding.args[idx] = n.value.get();
            check_arg(sig, *it, *n.value, t, ok);
        }
        for (std::size_t i = 0; i < sig.params.size(); ++i) {
            if (!binding.args[i] && !sig.params[i].default_value) {
                error(SemCode::Arg, call.span.begin,
                      "missing required argument '" + sig.params[i].name + "' of '" + sig.name + "'");
                ok = false;
            }
        }
        if (!ok) return ZType::Invalid;
        out_.calls[static_cast<std::size_t>(call.id)] = std::move(binding);
        return sig.result;
    }

    void check_arg(const BuiltinSignature& sig, const BuiltinParam& p, const Expr& arg, ZType t, bool& ok) {
        if (t == ZType::Invalid) {
            ok = false;
            return;
        }
        if (!assignable(t, p.type)) {
            error(SemCode::Type, arg.span.begin,
                  "argument '" + p.name + "' of '" + sig.name + "' expects " + quoted(p.type) + ", found " + quoted(t));
            ok = false;
        }
    }

    ZType binary(const Expr& e, const BinaryExpr& b) {
        const ZType l = expr(*b.lhs);
        const ZType r = expr(*b.rhs);
        if (l == ZType::Invalid || r == ZType::Invalid) return ZType::Invalid;
        const std::string op(binary_op_symbol(b.op));
        const std::string both = quoted(l) + " and " + quoted(r);
        if (b.op == BinaryOp::Eq || b.op == BinaryOp::Neq) {
            const bool comparable = (is_numeric(l) && is_numeric(r)) ||
                                    (l == r && (l == ZType::Bool || l == ZType::Text));
            if (!comparable) {
                error(SemCode::Type, e.span.begin, "operator " + op + " needs operands of one comparable type, found " + both);
                return ZType::Invalid;
            }
            return ZType::Bool;
        }
        if (!is_numeric(l) || !is_numeric(r)) {
            error(SemCode::Type, e.span.begin, "operator " + op + " requires numeric operands, found " + both);
            return ZType::Invalid;
        }
        if (is_comparison(b.op)) return ZType::Bool;
        if (b.op == BinaryOp::Div) return ZType::Float;
        return l == ZType::Int && r == ZType::Int ? ZType::Int : ZType::Float;
    }

    TypedProgram& out_;
    std::vector<std::map<std::string, int>> scopes_;
    std::vector<SemError> errors_;
};

}  // namespace

CheckResult check(Program program) {
    CheckResult result;
    TypedProgram tp;
    tp.ast = std::move(program);
    result.errors = Checker(tp).run();
    if (result.errors.empty()) result.program = std::move(tp);
    return result;
}

}  // namespace zeroml
