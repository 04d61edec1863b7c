#include "zeroml/schema.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "zeroml/errors.hpp"

namespace zeroml {

std::string_view task_name(TaskKind t) {
    return t == TaskKind::Classification ? "classification" : "regression";
}

std::optional<TaskKind> parse_task(std::string_view name) {
    if (name == "classification") return TaskKind::Classification;
    if (name == "regression") return TaskKind::Regression;
    return std::nullopt;
}

std::string_view transform_name(TransformKind t) {
    switch (t) {
        case TransformKind::Standardize: return "standardize";
        case TransformKind::OneHot: return "one_hot";
        case TransformKind::Passthrough: return "passthrough";
    }
    return "?";
}

std::size_t FeatureSchema::feature_count() const {
    std::size_t n = 0;
    for (const auto& t : inputs) n += t.width();
    return n;
}

std::vector<std::string> FeatureSchema::feature_names() const {
    std::vector<std::string> names;
    for (const auto& t : inputs) {
        if (t.kind == TransformKind::OneHot) {
            for (const auto& c : t.categories) names.push_back(t.column + "=" + c);
        } else {
            names.push_back(t.column);
        }
    }
    return names;
}

std::vector<std::string> target_labels(const Column& target) {
    std::vector<std::string> labels(target.size());
    for (std::size_t r = 0; r < target.size(); ++r) labels[r] = target.text(r);
    return labels;
}

TaskKind infer_task(const Dataset& d, std::string_view target) {
    const Column& t = d.column(target);
    if (t.type != ColumnType::Numeric) return TaskKind::Classification;
    std::set<double> distinct;
    for (std::size_t r = 0; r < t.size(); ++r) {
        if (t.is_missing(r)) continue;
        distinct.insert(t.numbers[r]);
        if (distinct.size() > kMaxClassificationDistinct) return TaskKind::Regression;
    }
    return TaskKind::Classification;
}

FeatureSchema fit_schema(const Dataset& d, std::string_view target, std::string_view preprocess, TaskKind task) {
    if (preprocess != "standard" && preprocess != "none") {
        throw SchemaError("unsupported preprocess '" + std::string(preprocess) + "' (expected \"standard\" or \"none\")");
    }
    const Column& target_col = d.column(target);
    FeatureSchema schema;
    schema.target = std::string(target);
    schema.task = task;

    if (task == TaskKind::Classification) {
        std::set<std::string> classes;
        for (std::size_t r = 0; r < target_col.size(); ++r) {
            if (!target_col.is_missing(r)) classes.insert(target_col.text(r));
        }
        schema.classes.assign(classes.begin(), classes.end());
    } else if (target_col.type == ColumnType::Categorical) {
        throw SchemaError("regression target '" + schema.target + "' must be numeric");
    }

    const bool standardize = preprocess == "standard";
    for (const auto& c : d.columns()) {
        if (c.name == target) continue;
        ColumnTransform t;
        t.column = c.name;
        if (c.type == ColumnType::Categorical) {
            t.kind = TransformKind::OneHot;
            std::set<std::string> seen;
            for (std::size_t r = 0; r < c.size(); ++r) {
                if (!c.is_missing(r)) seen.insert(c.levels[static_cast<std::size_t>(c.codes[r])]);
            }
            t.categories.assign(seen.begin(), seen.end());
        } else {
            double sum = 0;
            std::size_t n = 0;
            for (std::size_t r = 0; r < c.size(); ++r) {
                if (!c.is_missing(r)) {
                    sum += c.numbers[r];
                    ++n;
                }
            }
            t.mean = n ? sum / static_cast<double>(n) : 0.0;
            if (standardize) {
                double ss = 0;
                for (std::size_t r = 0; r < c.size(); ++r) {
                    if (!c.is_missing(r)) ss += (c.numbers[r] - t.mean) * (c.numbers[r] - t.mean);
                }
                t.kind = TransformKind::Standardize;
                t.std = n ? std::sqrt(ss / static_cast<double>(n)) : 0.0;
            } else {
                t.kind = TransformKind::Passthrough;
            }
        }
        schema.inputs.push_back(std::move(t));
    }
    return schema;
}

Design apply_schema(const FeatureSchema& schema, const Dataset& d) {
    std::vector<std::string> absent;
    for (const auto& t : schema.inputs) {
        if (!d.find(t.column)) absent.push_back(t.column);
    }
    if (!absent.empty()) {
        std::string names;
        for (const auto& a : absent) names += (names.empty() ? "" : ", ") + a;
        throw SchemaError("missing input column(s): " + names);
    }

    const std::size_t n = d.n_rows();
    Design out{Matrix(n, schema.feature_count()), {}};
    std::size_t offset = 0;
    for (const auto& t : schema.inputs) {
        const Column& c = d.column(t.column);
        if (t.kind == TransformKind::OneHot) {
            for (std::size_t r = 0; r < n; ++r) {
                if (c.is_missing(r)) continue;
                const std::string label = c.text(r);
                auto it = std::lower_bound(t.categories.begin(), t.categories.end(), label);
                if (it != t.categories.end() && *it == label) {
                    out.features(r, offset + static_cast<std::size_t>(it - t.categories.begin())) = 1.0;
                }
            }
        } else {
            if (c.type == ColumnType::Categorical) {
                throw SchemaError("column '" + t.column + "' must be numeric");
            }
            const double scale = t.std > 0.0 ? t.std : 1.0;
            for (std::size_t r = 0; r < n; ++r) {
                const double x = c.is_missing(r) ? t.mean : c.numbers[r];
                out.features(r, offset) = t.kind == TransformKind::Standardize ? (x - t.mean) / scale : x;
            }
        }
        offset += t.width();
    }

    if (const Column* target = d.find(schema.target)) {
        out.target.resize(n);
        if (schema.task == TaskKind::Classification) {
            for (std::size_t r = 0; r < n; ++r) {
                const std::string label = target->text(r);
                auto it = std::lower_bound(schema.classes.begin(), schema.classes.end(), label);
                const bool known = !target->is_missing(r) && it != schema.classes.end() && *it == label;
                out.target[r] = known ? static_cast<double>(it - schema.classes.begin()) : -1.0;
            }
        } else {
            if (target->type == ColumnType::Categorical) {
                throw SchemaError("regression target '" + schema.target + "' must be numeric");
            }
            for (std::size_t r = 0; r < n; ++r) out.target[r] = target->numbers[r];
        }
    }
    return out;
}

}  // namespace zeroml
