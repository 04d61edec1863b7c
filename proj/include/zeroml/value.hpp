#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <variant>

#include "zeroml/ast.hpp"
#include "zeroml/types.hpp"

namespace zeroml {

class Dataset;
struct TrainedModel;
struct Report;

struct RangeValue {
    std::int64_t lo = 0;
    std::int64_t hi = 0;
    friend bool operator==(const RangeValue&, const RangeValue&) = default;
};

struct UnitValue {
    friend bool operator==(const UnitValue&, const UnitValue&) = default;
};

/// Runtime value. Handles are immutable and shared.
using Value = std::variant<UnitValue, bool, std::int64_t, double, std::string, RangeValue,
                           std::shared_ptr<const Dataset>, std::shared_ptr<const TrainedModel>,
                           std::shared_ptr<const Report>>;

ZType value_type(const Value& v);
Value from_literal(const LiteralValue& v);

/// Raised by evaluate_binary for division by zero and integer overflow.
class ArithmeticFault : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shared by the constant folder and the VM so both agree bit for bit.
/// Operands must be Int, Float, Bool or Text as allowed by the checker.
LiteralValue evaluate_binary(BinaryOp op, const LiteralValue& lhs, const LiteralValue& rhs);

/// Text used by print: Int without a decimal point, Float in shortest
/// round-trip form (always with '.' or an exponent), handles as summaries.
std::string display(const Value& v);

}  // namespace zeroml
