#include "zeroml/bytecode.hpp"

#include <cmath>
#include <cstring>
#include <sstream>
#include <stdexcept>

#include "zeroml/builtins.hpp"
#include "zeroml/value.hpp"

namespace zeroml {

std::string_view opcode_name(OpCode op) {
    switch (op) {
        case OpCode::PushConst: return "PUSH_CONST";
        case OpCode::LoadSlot: return "LOAD_SLOT";
        case OpCode::StoreSlot: return "STORE_SLOT";
        case OpCode::Add: return "ADD";
        case OpCode::Sub: return "SUB";
        case OpCode::Mul: return "MUL";
        case OpCode::Div: return "DIV";
        case OpCode::CmpEq: return "CMP_EQ";
        case OpCode::CmpNe: return "CMP_NE";
        case OpCode::CmpLt: return "CMP_LT";
        case OpCode::CmpGt: return "CMP_GT";
        case OpCode::CmpLe: return "CMP_LE";
        case OpCode::CmpGe: return "CMP_GE";
        case OpCode::Jump: return "JUMP";
        case OpCode::JumpIfFalse: return "JUMP_IF_FALSE";
        case OpCode::CallBuiltin: return "CALL_BUILTIN";
        case OpCode::RangeInit: return "RANGE_INIT";
        case OpCode::RangeNext: return "RANGE_NEXT";
        case OpCode::Pop: return "POP";
        case OpCode::Halt: return "HALT";
    }
    return "?";
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

OpCode opcode_for(BinaryOp op) {
    switch (op) {
        case BinaryOp::Add: return OpCode::Add;
        case BinaryOp::Sub: return OpCode::Sub;
        case BinaryOp::Mul: return OpCode::Mul;
        case BinaryOp::Div: return OpCode::Div;
        case BinaryOp::Eq: return OpCode::CmpEq;
        case BinaryOp::Neq: return OpCode::CmpNe;
        case BinaryOp::Lt: return OpCode::CmpLt;
        case BinaryOp::Gt: return OpCode::CmpGt;
        case BinaryOp::Le: return OpCode::CmpLe;
        case BinaryOp::Ge: return OpCode::CmpGe;
    }
    return OpCode::Halt;
}

class Compiler {
public:
    explicit Compiler(const TypedProgram& tp) : tp_(tp) {
        bc_.slot_count = static_cast<int>(tp.symbols.size());
    }

    Bytecode run() {
        for (const auto& s : tp_.ast.statements) statement(*s);
        bc_.statement_starts.push_back(bc_.code.size());
        emit(OpCode::Halt, 0, 0, tp_.ast.span.end.line);
        return std::move(bc_);
    }

private:
    std::size_t emit(OpCode op, std::int32_t a, std::int32_t b, int line, std::uint32_t provided = 0) {
        bc_.code.push_back(Instruction{op, a, b, provided, line});
        return bc_.code.size() - 1;
    }

    void patch(std::size_t at) { bc_.code[at].a = static_cast<std::int32_t>(bc_.code.size()); }

    std::int32_t constant(const LiteralValue& v) {
        for (std::size_t i = 0; i < bc_.constants.size(); ++i) {
            if (bc_.constants[i].index() == v.index() && bc_.constants[i] == v) {
                // Distinguish 0.0 from -0.0, which compare equal.
                if (const auto* d = std::get_if<double>(&v)) {
                    if (std::signbit(*d) != std::signbit(std::get<double>(bc_.constants[i]))) continue;
                }
                return static_cast<std::int32_t>(i);
            }
        }
        bc_.constants.push_back(v);
        return static_cast<std::int32_t>(bc_.constants.size() - 1);
    }

    void statement(const Stmt& s) {
        bc_.statement_starts.push_back(bc_.code.size());
        const int line = s.span.begin.line;
        std::visit(overloaded{
                       [&](const LetDecl& d) {
                           expr(*d.init);
                           emit(OpCode::StoreSlot, tp_.declared.at(&s), 0, line);
                       },
                       [&](const ExprStmt& e) {
                           expr(*e.expr);
                           emit(OpCode::Pop, 0, 0, line);
                       },
                       [&](const IfElse& i) {
                           expr(*i.cond);
                           const std::size_t to_else = emit(OpCode::JumpIfFalse, 0, 0, line);
                           for (const auto& inner : i.then_block.statements) statement(*inner);
                           if (i.else_block) {
                               const std::size_t to_end = emit(OpCode::Jump, 0, 0, line);
                               patch(to_else);
                               for (const auto& inner : i.else_block->statements) statement(*inner);
                               patch(to_end);
                           } else {
                               patch(to_else);
                           }
                       },
                       [&](const ForLoop& f) {
                           const std::int32_t iter_slot = bc_.slot_count++;
                           expr(*f.iterable);
                           emit(OpCode::RangeInit, iter_slot, 0, line);
                           const auto head = static_cast<std::int32_t>(bc_.code.size());
                           emit(OpCode::RangeNext, iter_slot, 0, line);
                           const std::size_t exit = emit(OpCode::JumpIfFalse, 0, 0, line);
                           emit(OpCode::StoreSlot, tp_.declared.at(&s), 0, line);
                           for (const auto& inner : f.body.statements) statement(*inner);
                           emit(OpCode::Jump, head, 0, line);
                           patch(exit);
                       },
                   },
                   s.node);
    }

    void call(const Expr& e, int line) {
        const CallBinding& binding = *tp_.calls.at(static_cast<std::size_t>(e.id));
        const BuiltinSignature& sig = builtin(binding.builtin);
        std::uint32_t provided = 0;
        for (std::size_t i = 0; i < sig.params.size(); ++i) {
            if (const Expr* arg = binding.args[i]) {
                expr(*arg);
                provided |= 1u << i;
            } else {
                emit(OpCode::PushConst, constant(*sig.params[i].default_value), 0, line);
            }
        }
        emit(OpCode::CallBuiltin, static_cast<std::int32_t>(binding.builtin),
             static_cast<std::int32_t>(sig.params.size()), line, provided);
    }

    void expr(const Expr& e) {
        const int line = e.span.begin.line;
        if (auto folded = fold_constant(e)) {
            emit(OpCode::PushConst, constant(*folded), 0, line);
            return;
        }
        std::visit(overloaded{
                       [&](const LiteralExpr& l) { emit(OpCode::PushConst, constant(l.value), 0, line); },
                       [&](const IdentifierExpr&) {
                           emit(OpCode::LoadSlot, tp_.resolved.at(static_cast<std::size_t>(e.id)), 0, line);
                       },
                       [&](const CallExpr&) { call(e, line); },
                       [&](const MethodCallExpr&) { call(e, line); },
                       [&](const BinaryExpr& b) {
                           expr(*b.lhs);
                           expr(*b.rhs);
                           emit(opcode_for(b.op), 0, 0, line);
                       },
                   },
                   e.node);
    }

    const TypedProgram& tp_;
    Bytecode bc_;
};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

}  // namespace

std::optional<LiteralValue> fold_constant(const Expr& e) {
    if (const auto* l = std::get_if<LiteralExpr>(&e.node)) return l->value;
    const auto* b = std::get_if<BinaryExpr>(&e.node);
    if (!b) return std::nullopt;
    auto lhs = fold_constant(*b->lhs);
    if (!lhs) return std::nullopt;
    auto rhs = fold_constant(*b->rhs);
    if (!rhs) return std::nullopt;
    try {
        return evaluate_binary(b->op, *lhs, *rhs);
    } catch (const ArithmeticFault&) {
        return std::nullopt;  // left for the VM to report at run time
    } catch (const std::logic_error&) {
        return std::nullopt;
    }
}

Bytecode compile(const TypedProgram& program) {
    Bytecode bc = Compiler(program).run();
    verify(bc);
    return bc;
}

void verify(const Bytecode& bc) {
    const auto n = static_cast<std::int32_t>(bc.code.size());
    if (bc.code.empty() || bc.code.back().op != OpCode::Halt) throw std::logic_error("bytecode must end with HALT");
    for (std::int32_t i = 0; i < n; ++i) {
        const Instruction& ins = bc.code[static_cast<std::size_t>(i)];
        switch (ins.op) {
            case OpCode::Jump:
            case OpCode::JumpIfFalse:
                if (ins.a < 0 || ins.a >= n) throw std::logic_error("jump target out of range at " + std::to_string(i));
                break;
            case OpCode::LoadSlot:
            case OpCode::StoreSlot:
            case OpCode::RangeInit:
            case OpCode::RangeNext:
                if (ins.a < 0 || ins.a >= bc.slot_count) throw std::logic_error("slot out of range at " + std::to_string(i));
                break;
            case OpCode::PushConst:
                if (ins.a < 0 || ins.a >= static_cast<std::int32_t>(bc.constants.size())) {
                    throw std::logic_error("constant out of range at " + std::to_string(i));
                }
                break;
            case OpCode::CallBuiltin:
                if (ins.a < 0 || ins.a >= static_cast<std::int32_t>(builtin_catalog().size()) ||
                    ins.b != static_cast<std::int32_t>(builtin(static_cast<BuiltinId>(ins.a)).params.size())) {
                    throw std::logic_error("bad builtin call at " + std::to_string(i));
                }
                break;
            default:
                break;
        }
    }
}

std::vector<std::uint8_t> Bytecode::encode() const {
    std::vector<std::uint8_t> out{'Z', 'M', 'L', 'B', 1};
    put_u32(out, static_cast<std::uint32_t>(constants.size()));
    for (const auto& c : constants) {
        out.push_back(static_cast<std::uint8_t>(c.index()));
        std::visit(overloaded{
                       [&](std::int64_t i) { put_u64(out, static_cast<std::uint64_t>(i)); },
                       [&](double d) {
                           std::uint64_t bits;
                           std::memcpy(&bits, &d, sizeof bits);
                           put_u64(out, bits);
                       },
                       [&](const std::string& s) {
                           put_u32(out, static_cast<std::uint32_t>(s.size()));
                           out.insert(out.end(), s.begin(), s.end());
                       },
                       [&](bool b) { out.push_back(b ? 1 : 0); },
                   },
                   c);
    }
    put_u32(out, static_cast<std::uint32_t>(slot_count));
    put_u32(out, static_cast<std::uint32_t>(code.size()));
    for (const auto& ins : code) {
        out.push_back(static_cast<std::uint8_t>(ins.op));
        put_u32(out, static_cast<std::uint32_t>(ins.a));
        put_u32(out, static_cast<std::uint32_t>(ins.b));
        put_u32(out, ins.provided);
        put_u32(out, static_cast<std::uint32_t>(ins.line));
    }
    return out;
}

std::string Bytecode::disassemble() const {
    std::ostringstream os;
    os << "constants:\n";
    for (std::size_t i = 0; i < constants.size(); ++i) {
        Expr e;
        e.node = LiteralExpr{constants[i]};
        // Folded constants can be negative, which the literal printer never sees.
        std::string text = std::visit(overloaded{
                                          [](std::int64_t v) { return std::to_string(v); },
                                          [](double v) { return format_float_literal(std::abs(v)).insert(0, std::signbit(v) ? "-" : ""); },
                                          [&](const auto&) { return pretty_print(e); },
                                      },
                                      constants[i]);
        os << "  #" << i << " " << text << "\n";
    }
    os << "slots: " << slot_count << "\ncode:\n";
    for (std::size_t i = 0; i < code.size(); ++i) {
        const auto& ins = code[i];
        os << "  " << i << ": " << opcode_name(ins.op);
        switch (ins.op) {
            case OpCode::PushConst:
            case OpCode::LoadSlot:
            case OpCode::StoreSlot:
            case OpCode::Jump:
            case OpCode::JumpIfFalse:
            case OpCode::RangeInit:
            case OpCode::RangeNext: os << " " << ins.a; break;
            case OpCode::CallBuiltin:
                os << " " << builtin(static_cast<BuiltinId>(ins.a)).name << " " << ins.b;
                break;
            default: break;
        }
        os << "  ; line " << ins.line << "\n";
    }
    return os.str();
}

}  // namespace zeroml
