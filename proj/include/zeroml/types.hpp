#pragma once

#include <string_view>

namespace zeroml {

enum class ZType {
    Unit,
    Bool,
    Int,
    Float,
    Text,
    Range,
    Dataset,
    Model,
    Report,
    Any,      // signature wildcard (print); never assigned to an expression
    Invalid,  // checker-internal: expression already produced a diagnostic
};

std::string_view type_name(ZType t);

inline bool is_numeric(ZType t) { return t == ZType::Int || t == ZType::Float; }

/// True when a value of type `actual` may be passed where `expected` is required.
inline bool assignable(ZType actual, ZType expected) {
    return expected == ZType::Any || actual == expected ||
           (actual == ZType::Int && expected == ZType::Float);
}

}  // namespace zeroml
