#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "zeroml/bytecode.hpp"
#include "zeroml/semantics.hpp"

namespace zeroml {

struct Diagnostic {
    std::string code;  // E_LEX, E_PARSE or a SemCode name
    int line = 1;
    int col = 1;
    std::string message;

    /// `file:line:col: CODE message`
    std::string format(std::string_view file) const;
};

struct CompileOutcome {
    std::optional<TypedProgram> program;
    std::optional<Bytecode> bytecode;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return diagnostics.empty(); }
};

/// tokenize -> parse -> check -> compile. All static errors surface here,
/// before anything executes.
CompileOutcome compile_source(std::string_view source);

}  // namespace zeroml
