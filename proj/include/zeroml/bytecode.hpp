#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "zeroml/ast.hpp"
#include "zeroml/semantics.hpp"

namespace zeroml {

enum class OpCode : std::uint8_t {
    PushConst,    // a = constant index
    LoadSlot,     // a = slot
    StoreSlot,    // a = slot
    Add,
    Sub,
    Mul,
    Div,
    CmpEq,
    CmpNe,
    CmpLt,
    CmpGt,
    CmpLe,
    CmpGe,
    Jump,         // a = target
    JumpIfFalse,  // a = target; pops a Bool
    CallBuiltin,  // a = BuiltinId, b = argument count, provided = bit i set if argument i was written
    RangeInit,    // a = hidden slot; pops a Range into it
    RangeNext,    // a = hidden slot; pushes (Int, true) while items remain, else false
    Pop,
    Halt,
};

std::string_view opcode_name(OpCode op);

struct Instruction {
    OpCode op = OpCode::Halt;
    std::int32_t a = 0;
    std::int32_t b = 0;
    std::uint32_t provided = 0;
    std::int32_t line = 0;
};

struct Bytecode {
    std::vector<LiteralValue> constants;
    std::vector<Instruction> code;
    int slot_count = 0;
    /// Instruction indices at which a statement begins (stack must be empty).
    std::vector<std::size_t> statement_starts;

    /// Canonical byte encoding; equal programs compile to equal bytes.
    std::vector<std::uint8_t> encode() const;
    std::string disassemble() const;
};

/// Lowers a checked program. Literal-only arithmetic and comparisons are
/// folded; slots are the checker's symbol indices (declaration order), loop
/// iterator slots follow them.
Bytecode compile(const TypedProgram& program);

/// Structural validation: jump targets, slot and constant indices. Throws
/// std::logic_error.
void verify(const Bytecode& bc);

/// Folded value of a literal-only subtree, if it has one and evaluating it
/// cannot fault.
std::optional<LiteralValue> fold_constant(const Expr& e);

}  // namespace zeroml
