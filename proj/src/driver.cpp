#include "zeroml/driver.hpp"

#include "zeroml/lexer.hpp"
#include "zeroml/parser.hpp"

namespace zeroml {

std::string Diagnostic::format(std::string_view file) const {
    return std::string(file) + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + code + " " + message;
}

CompileOutcome compile_source(std::string_view source) {
    CompileOutcome out;
    Program ast;
    try {
        ast = parse_source(source);
    } catch (const LexError& e) {
        out.diagnostics.push_back({"E_LEX", e.line(), e.col(), e.what()});
        return out;
    } catch (const ParseError& e) {
        out.diagnostics.push_back({"E_PARSE", e.line(), e.col(), e.what()});
        return out;
    }
    CheckResult checked = check(std::move(ast));
    for (const auto& e : checked.errors) {
        out.diagnostics.push_back({std::string(sem_code_name(e.code)), e.line, e.col, e.message});
    }
    if (!checked.ok()) return out;
    out.program = std::move(checked.program);
    out.bytecode = compile(*out.program);
    return out;
}

}  // namespace zeroml
