#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "zeroml/ast.hpp"
#include "zeroml/types.hpp"

namespace zeroml {

enum class BuiltinId { Load, AutoML, Report, Deploy, Predict, Print, Range };

struct BuiltinParam {
    std::string name;
    ZType type;
    std::optional<LiteralValue> default_value;  // absent means required
};

struct BuiltinSignature {
    BuiltinId id;
    std::string name;
    std::vector<BuiltinParam> params;
    ZType result;
    bool method_form;  // callable as `receiver.name(...)` with receiver bound to params[0]
    std::string doc;

    std::size_t required_count() const;
};

/// The fixed v1 catalog, in a stable order.
std::span<const BuiltinSignature> builtin_catalog();

const BuiltinSignature* find_builtin(std::string_view name);
const BuiltinSignature& builtin(BuiltinId id);

/// One line per builtin: `name(param: Type = default, ...) -> Type`.
std::string format_signature(const BuiltinSignature& sig);

}  // namespace zeroml
