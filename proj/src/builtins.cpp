#include "zeroml/builtins.hpp"

#include <algorithm>

namespace zeroml {

std::string_view type_name(ZType t) {
    switch (t) {
        case ZType::Unit: return "Unit";
        case ZType::Bool: return "Bool";
        case ZType::Int: return "Int";
        case ZType::Float: return "Float";
        case ZType::Text: return "Text";
        case ZType::Range: return "Range";
        case ZType::Dataset: return "Dataset";
        case ZType::Model: return "Model";
        case ZType::Report: return "Report";
        case ZType::Any: return "Any";
        case ZType::Invalid: return "<invalid>";
    }
    return "?";
}

std::size_t BuiltinSignature::required_count() const {
    return static_cast<std::size_t>(std::count_if(params.begin(), params.end(),
                                                  [](const BuiltinParam& p) { return !p.default_value; }));
}

namespace {

const std::vector<BuiltinSignature>& catalog() {
    using P = BuiltinParam;
    static const std::vector<BuiltinSignature> table = {
        {BuiltinId::Load, "load", {P{"path", ZType::Text, {}}}, ZType::Dataset, false,
         "Read a CSV file (header row required) into a Dataset."},
        {BuiltinId::AutoML,
         "automl",
         {
             P{"input", ZType::Dataset, {}},
             P{"target", ZType::Text, {}},
             P{"task", ZType::Text, LiteralValue{std::string("auto")}},
             P{"preprocess", ZType::Text, LiteralValue{std::string("standard")}},
             P{"max_time", ZType::Float, LiteralValue{0.0}},
             P{"evaluation", ZType::Text, LiteralValue{std::string("auto")}},
             P{"folds", ZType::Int, LiteralValue{std::int64_t{5}}},
             P{"seed", ZType::Int, LiteralValue{std::int64_t{42}}},
         },
         ZType::Model,
         false,
         "Clean the data, cross-validate the candidate roster in parallel and refit the best model. "
         "max_time = 0 means unlimited."},
        {BuiltinId::Report, "report", {P{"m", ZType::Model, {}}}, ZType::Report, true,
         "Print the search report table and return it."},
        {BuiltinId::Deploy,
         "deploy",
         {P{"m", ZType::Model, {}}, P{"target", ZType::Text, {}}, P{"dest", ZType::Text, {}}},
         ZType::Unit,
         false,
         "Deploy a model: target \"file\"/\"edge\" writes an artifact, \"api\" serves HTTP at host:port."},
        {BuiltinId::Predict, "predict", {P{"m", ZType::Model, {}}, P{"data", ZType::Dataset, {}}},
         ZType::Dataset, false, "Predict every row of a Dataset; returns a one-column Dataset."},
        {BuiltinId::Print, "print", {P{"v", ZType::Any, {}}}, ZType::Unit, false, "Print a value and a newline."},
        {BuiltinId::Range, "range", {P{"lo", ZType::Int, {}}, P{"hi", ZType::Int, {}}}, ZType::Range, false,
         "Half-open integer range lo..hi."},
    };
    return table;
}

}  // namespace

std::span<const BuiltinSignature> builtin_catalog() { return catalog(); }

const BuiltinSignature* find_builtin(std::string_view name) {
    for (const auto& sig : catalog()) {
        if (sig.name == name) return &sig;
    }
    return nullptr;
}

const BuiltinSignature& builtin(BuiltinId id) { return catalog().at(static_cast<std::size_t>(id)); }

std::string format_signature(const BuiltinSignature& sig) {
    std::string out = sig.name + "(";
    for (std::size_t i = 0; i < sig.params.size(); ++i) {
        const auto& p = sig.params[i];
        if (i) out += ", ";
        out += p.name + ": " + std::string(type_name(p.type));
        if (p.default_value) {
            LiteralExpr lit{*p.default_value};
            Expr e;
            e.node = std::move(lit);
            out += " = " + pretty_print(e);
        }
    }
    out += ") -> " + std::string(type_name(sig.result));
    if (sig.method_form) out += "  [also " + sig.params[0].name + "." + sig.name + "()]";
    return out;
}

}  // namespace zeroml
