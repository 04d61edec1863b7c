#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "zeroml/schema.hpp"

namespace zeroml {

enum class ModelKind {
    LogisticRegression,
    DecisionTreeClassifier,
    KnnClassifier,
    RidgeRegression,
    DecisionTreeRegressor,
    KnnRegressor,
};

std::string_view model_kind_name(ModelKind k);
std::optional<ModelKind> parse_model_kind(std::string_view name);
TaskKind model_task(ModelKind k);

struct Candidate {
    int index = 0;
    ModelKind kind = ModelKind::LogisticRegression;
    std::map<std::string, double> hyperparams;

    double param(const std::string& name) const;
    /// "l2=0.1", "max_depth=6", "k=3".
    std::string describe_params() const;
};

// Fixed hyperparameters of the native learners.
inline constexpr double kLogisticLearningRate = 0.1;
inline constexpr int kLogisticEpochs = 200;
inline constexpr std::size_t kTreeMinLeaf = 2;

/// One weight row per decision function: a single row for binary logistic
/// regression and ridge, one row per class for one-vs-rest.
struct LinearParams {
    std::vector<std::vector<double>> weights;
    std::vector<double> bias;
    std::optional<double> constant;  // set when training saw a single class
};

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double leaf_value = 0.0;  // class id or mean target; set on every node
};

struct TreeParams {
    std::vector<TreeNode> nodes;  // nodes[0] is the root
    int depth() const;
};

struct KnnParams {
    int k = 1;
    Matrix train;
    std::vector<double> targets;
};

using ModelParams = std::variant<LinearParams, TreeParams, KnnParams>;

struct FittedModel {
    ModelKind kind = ModelKind::LogisticRegression;
    int n_classes = 0;  // 0 for regression
    ModelParams params;

    /// Class ids (as doubles) for classifiers, values for regressors.
    std::vector<double> predict(const Matrix& x) const;
    double predict_row(std::span<const double> x) const;
};

/// Trains `candidate` on (x, y). For classifiers y holds class ids in
/// [0, n_classes). Deterministic given its inputs.
FittedModel fit(const Candidate& candidate, const Matrix& x, std::span<const double> y, int n_classes);

// Exposed for numeric tests.

struct LogisticObjective {
    double loss;
    std::vector<double> gradient;  // weights then bias
};

/// Mean binary cross-entropy plus (l2/2)*|w|^2 (bias unpenalized) and its
/// gradient. `params` holds the weights followed by the bias; y01 in {0,1}.
LogisticObjective logistic_objective(std::span<const double> params, const Matrix& x, std::span<const double> y01,
                                     double l2);

/// Weighted impurity of the best split found at the root, for tests.
struct SplitChoice {
    int feature = -1;
    double threshold = 0.0;
    double weighted_impurity = 0.0;
};

/// Best root split under the CART rules (midpoint thresholds, min leaf size);
/// feature = -1 when no admissible split exists.
SplitChoice best_split(const Matrix& x, std::span<const double> y, std::span<const std::size_t> rows,
                       bool classification, int n_classes);

double gini(std::span<const double> counts, double total);

}  // namespace zeroml
