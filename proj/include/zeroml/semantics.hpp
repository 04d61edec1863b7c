#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "zeroml/ast.hpp"
#include "zeroml/builtins.hpp"
#include "zeroml/types.hpp"

namespace zeroml {

enum class SemCode { Redecl, Undef, Type, Arg, NoMut };

/// "E_REDECL", "E_UNDEF", ...
std::string_view sem_code_name(SemCode code);

struct SemError {
    SemCode code;
    int line = 1;
    int col = 1;
    std::string message;
};

/// A declared name: a `let` binding or a `for` variable.
struct Symbol {
    std::string name;
    ZType type = ZType::Unit;
    Span declared_at;
    int scope_depth = 0;  // 0 = program scope
};

/// Resolved argument list of a builtin call: one entry per catalog
/// parameter, nullptr where the default applies.
struct CallBinding {
    BuiltinId builtin;
    std::vector<const Expr*> args;
};

/// A checked program. Owns the AST; the side tables are keyed by Expr::id
/// and by statement address.
struct TypedProgram {
    Program ast;
    std::vector<ZType> type_of;                    // per expression id
    std::vector<int> resolved;                     // identifier id -> symbol index, -1 otherwise
    std::vector<std::optional<CallBinding>> calls; // call / method-call id -> binding
    std::vector<Symbol> symbols;                   // declaration order
    std::map<const Stmt*, int> declared;           // LetDecl / ForLoop -> symbol index

    ZType type(const Expr& e) const { return type_of.at(static_cast<std::size_t>(e.id)); }
};

struct CheckResult {
    std::optional<TypedProgram> program;  // set iff errors is empty
    std::vector<SemError> errors;         // source order

    bool ok() const { return errors.empty(); }
};

/// Name resolution, type checking and immutability rules. Collects every
/// error rather than stopping at the first.
CheckResult check(Program program);

}  // namespace zeroml
