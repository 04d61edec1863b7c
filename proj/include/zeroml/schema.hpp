#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "zeroml/dataset.hpp"

namespace zeroml {

enum class TaskKind { Classification, Regression };

std::string_view task_name(TaskKind t);
std::optional<TaskKind> parse_task(std::string_view name);

enum class TransformKind { Standardize, OneHot, Passthrough };

std::string_view transform_name(TransformKind t);

struct ColumnTransform {
    std::string column;
    TransformKind kind = TransformKind::Passthrough;
    double mean = 0.0;                    // Standardize; also the fill for missing numeric cells
    double std = 0.0;                     // population std, Standardize only
    std::vector<std::string> categories;  // OneHot, sorted

    std::size_t width() const { return kind == TransformKind::OneHot ? categories.size() : 1; }
};

/// Frozen training-time preprocessing. Applying it never recomputes statistics.
struct FeatureSchema {
    std::vector<ColumnTransform> inputs;
    std::string target;
    TaskKind task = TaskKind::Classification;
    std::vector<std::string> classes;  // classification only, sorted

    std::size_t feature_count() const;
    std::vector<std::string> feature_names() const;
};

/// Dense row-major matrix.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c, 0.0) {}

    double& operator()(std::size_t r, std::size_t c) { return values[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
    std::span<const double> row(std::size_t r) const { return {values.data() + r * cols, cols}; }
};

struct Design {
    Matrix features;
    /// Class index (classification; -1 for a label unseen at fit time) or
    /// numeric value (regression). Empty when the dataset lacks the target.
    std::vector<double> target;
};

/// Task inference: a categorical or boolean target, or a numeric one with at
/// most 10 distinct values, is classification.
TaskKind infer_task(const Dataset& d, std::string_view target);
inline constexpr std::size_t kMaxClassificationDistinct = 10;

/// preprocess is "standard" (standardize numerics) or "none" (pass through);
/// categoricals are always one-hot encoded. Throws SchemaError.
FeatureSchema fit_schema(const Dataset& d, std::string_view target, std::string_view preprocess, TaskKind task);

/// Throws SchemaError when an input column is missing or has an incompatible type.
Design apply_schema(const FeatureSchema& schema, const Dataset& d);

/// Textual class label of every target cell.
std::vector<std::string> target_labels(const Column& target);

}  // namespace zeroml
