#include "zeroml/models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Dense>

#include "zeroml/dataset.hpp"
#include "zeroml/errors.hpp"

namespace zeroml {

std::string_view model_kind_name(ModelKind k) {
    switch (k) {
        case ModelKind::LogisticRegression: return "LogisticRegression";
        case ModelKind::DecisionTreeClassifier: return "DecisionTreeClassifier";
        case ModelKind::KnnClassifier: return "KnnClassifier";
        case ModelKind::RidgeRegression: return "RidgeRegression";
        case ModelKind::DecisionTreeRegressor: return "DecisionTreeRegressor";
        case ModelKind::KnnRegressor: return "KnnRegressor";
    }
    return "?";
}

std::optional<ModelKind> parse_model_kind(std::string_view name) {
    for (auto k : {ModelKind::LogisticRegression, ModelKind::DecisionTreeClassifier, ModelKind::KnnClassifier,
                   ModelKind::RidgeRegression, ModelKind::DecisionTreeRegressor, ModelKind::KnnRegressor}) {
        if (model_kind_name(k) == name) return k;
    }
    return std::nullopt;
}

TaskKind model_task(ModelKind k) {
    switch (k) {
        case ModelKind::LogisticRegression:
        case ModelKind::DecisionTreeClassifier:
        case ModelKind::KnnClassifier: return TaskKind::Classification;
        default: return TaskKind::Regression;
    }
}

double Candidate::param(const std::string& name) const {
    auto it = hyperparams.find(name);
    if (it == hyperparams.end()) throw FitError("candidate has no hyperparameter '" + name + "'");
    return it->second;
}

std::string Candidate::describe_params() const {
    std::string out;
    for (const auto& [name, value] : hyperparams) {
        if (!out.empty()) out += ",";
        out += name + "=" + format_number(value);
    }
    return out;
}

int TreeParams::depth() const {
    if (nodes.empty()) return 0;
    int deepest = 0;
    std::vector<std::pair<int, int>> stack{{0, 0}};
    while (!stack.empty()) {
        auto [id, d] = stack.back();
        stack.pop_back();
        deepest = std::max(deepest, d);
        const TreeNode& n = nodes[static_cast<std::size_t>(id)];
        if (n.feature >= 0) {
            stack.push_back({n.left, d + 1});
            stack.push_back({n.right, d + 1});
        }
    }
    return deepest;
}

// ---------------------------------------------------------------- logistic

namespace {

double sigmoid(double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow.
double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

LogisticObjective logistic_objective(std::span<const double> params, const Matrix& x, std::span<const double> y01,
                                     double l2) {
    const std::size_t p = x.cols;
    const auto w = params.first(p);
    const double b = params[p];
    LogisticObjective out{0.0, std::vector<double>(p + 1, 0.0)};
    const double inv_n = 1.0 / static_cast<double>(x.rows);
    for (std::size_t r = 0; r < x.rows; ++r) {
        const auto row = x.row(r);
        const double z = dot(w, row) + b;
        // -y log s(z) - (1-y) log(1-s(z)) == softplus(z) - y z
        out.loss += (softplus(z) - y01[r] * z) * inv_n;
        const double residual = (sigmoid(z) - y01[r]) * inv_n;
        for (std::size_t j = 0; j < p; ++j) out.gradient[j] += residual * row[j];
        out.gradient[p] += residual;
    }
    for (std::size_t j = 0; j < p; ++j) {
        out.loss += 0.5 * l2 * w[j] * w[j];
        out.gradient[j] += l2 * w[j];
    }
    return out;
}

namespace {

std::vector<double> train_binary_logistic(const Matrix& x, std::span<const double> y01, double l2) {
    std::vector<double> params(x.cols + 1, 0.0);
    for (int epoch = 0; epoch < kLogisticEpochs; ++epoch) {
        const auto obj = logistic_objective(params, x, y01, l2);
        for (std::size_t j = 0; j < params.size(); ++j) params[j] -= kLogisticLearningRate * obj.gradient[j];
    }
    return params;
}

LinearParams fit_logistic(const Matrix& x, std::span<const double> y, int n_classes, double l2) {
    LinearParams out;
    std::vector<int> seen(static_cast<std::size_t>(std::max(n_classes, 1)), 0);
    for (double v : y) seen.at(static_cast<std::size_t>(v)) = 1;
    if (std::accumulate(seen.begin(), seen.end(), 0) <= 1) {
        // Single observed class: constant predictor.
        auto it = std::find(seen.begin(), seen.end(), 1);
        out.constant = it == seen.end() ? 0.0 : static_cast<double>(it - seen.begin());
        return out;
    }
    const int models = n_classes == 2 ? 1 : n_classes;
    for (int m = 0; m < models; ++m) {
        const double positive = n_classes == 2 ? 1.0 : static_cast<double>(m);
        std::vector<double> y01(y.size());
        for (std::size_t i = 0; i < y.size(); ++i) y01[i] = y[i] == positive ? 1.0 : 0.0;
        auto params = train_binary_logistic(x, y01, l2);
        out.bias.push_back(params.back());
        params.pop_back();
        out.weights.push_back(std::move(params));
    }
    return out;
}

// ------------------------------------------------------------------- ridge

LinearParams fit_ridge(const Matrix& x, std::span<const double> y, double l2) {
    const auto p = static_cast<Eigen::Index>(x.cols);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(p + 1, p + 1);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(p + 1);
    for (std::size_t r = 0; r < x.rows; ++r) {
        Eigen::VectorXd z(p + 1);
        for (Eigen::Index j = 0; j < p; ++j) z[j] = x(r, static_cast<std::size_t>(j));
        z[p] = 1.0;
        a.noalias() += z * z.transpose();
        b.noalias() += y[r] * z;
    }
    for (Eigen::Index j = 0; j < p; ++j) a(j, j) += l2;
    const Eigen::VectorXd w = a.completeOrthogonalDecomposition().solve(b);
    LinearParams out;
    out.weights.emplace_back(w.data(), w.data() + p);
    out.bias.push_back(w[p]);
    return out;
}

// -------------------------------------------------------------------- tree

struct SplitScan {
    const Matrix& x;
    std::span<const double> y;
    bool classification;
    int n_classes;

    double node_impurity(std::span<const std::size_t> rows) const {
        const double n = static_cast<double>(rows.size());
        if (classification) {
            std::vector<double> counts(static_cast<std::size_t>(n_classes), 0.0);
            for (std::size_t r : rows) counts[static_cast<std::size_t>(y[r])] += 1.0;
            return gini(counts, n);
        }
        double sum = 0, sq = 0;
        for (std::size_t r : rows) {
            sum += y[r];
            sq += y[r] * y[r];
        }
        return std::max(0.0, sq / n - (sum / n) * (sum / n));
    }

    SplitChoice best(std::span<const std::size_t> rows) const {
        SplitChoice choice;
        const std::size_t n = rows.size();
        if (n < 2 * kTreeMinLeaf) return choice;
        std::vector<std::size_t> sorted(rows.begin(), rows.end());
        bool found = false;
        for (std::size_t f = 0; f < x.cols; ++f) {
            std::stable_sort(sorted.begin(), sorted.end(),
                             [&](std::size_t a, std::size_t b) { return x(a, f) < x(b, f); });
            std::vector<double> left_counts(classification ? static_cast<std::size_t>(n_classes) : 0, 0.0);
            std::vector<double> right_counts = left_counts;
            double left_sum = 0, left_sq = 0, right_sum = 0, right_sq = 0;
            for (std::size_t r : sorted) {
                if (classification) {
                    right_counts[static_cast<std::size_t>(y[r])] += 1.0;
                } else {
                    right_sum += y[r];
                    right_sq += y[r] * y[r];
                }
            }
            for (std::size_t i = 1; i < n; ++i) {
                const std::size_t moved = sorted[i - 1];
                if (classification) {
                    left_counts[static_cast<std::size_t>(y[moved])] += 1.0;
                    right_counts[static_cast<std::size_t>(y[moved])] -= 1.0;
                } else {
                    left_sum += y[moved];
                    left_sq += y[moved] * y[moved];
                    right_sum -= y[moved];
                    right_sq -= y[moved] * y[moved];
                }
                if (i < kTreeMinLeaf || n - i < kTreeMinLeaf) continue;
                const double lo = x(sorted[i - 1], f);
                const double hi = x(sorted[i], f);
                if (!(lo < hi)) continue;
                const double nl = static_cast<double>(i);
                const double nr = static_cast<double>(n - i);
                double impurity;
                if (classification) {
                    impurity = (nl * gini(left_counts, nl) + nr * gini(right_counts, nr)) / static_cast<double>(n);
                } else {
                    const double vl = std::max(0.0, left_sq / nl - (left_sum / nl) * (left_sum / nl));
                    const double vr = std::max(0.0, right_sq / nr - (right_sum / nr) * (right_sum / nr));
                    impurity = (nl * vl + nr * vr) / static_cast<double>(n);
                }
                if (!found || impurity < choice.weighted_impurity) {
                    found = true;
                    double mid = lo + (hi - lo) / 2.0;
                    if (!(mid < hi)) mid = lo;
                    choice = SplitChoice{static_cast<int>(f), mid, impurity};
                }
            }
        }
        return choice;
    }
};

double leaf_value(std::span<const double> y, std::span<const std::size_t> rows, bool classification,
                  int n_classes) {
    if (rows.empty()) return 0.0;
    if (classification) {
        std::vector<std::size_t> counts(static_cast<std::size_t>(n_classes), 0);
        for (std::size_t r : rows) ++counts[static_cast<std::size_t>(y[r])];
        return static_cast<double>(std::max_element(counts.begin(), counts.end()) - counts.begin());
    }
    double sum = 0;
    for (std::size_t r : rows) sum += y[r];
    return sum / static_cast<double>(rows.size());
}

class TreeBuilder {
public:
    TreeBuilder(const Matrix& x, std::span<const double> y, bool classification, int n_classes, int max_depth)
        : scan_{x, y, classification, n_classes}, max_depth_(max_depth) {}

    TreeParams build(std::vector<std::size_t> rows) {
        grow(std::move(rows), 0);
        return std::move(tree_);
    }

private:
    int grow(std::vector<std::size_t> rows, int depth) {
        const int id = static_cast<int>(tree_.nodes.size());
        tree_.nodes.push_back(TreeNode{});
        tree_.nodes.back().leaf_value = leaf_value(scan_.y, rows, scan_.classification, scan_.n_classes);
        if (depth >= max_depth_ || rows.size() < 2 * kTreeMinLeaf || scan_.node_impurity(rows) <= 0.0) return id;
        const SplitChoice split = scan_.best(rows);
        if (split.feature < 0) return id;

        std::vector<std::size_t> left, right;
        for (std::size_t r : rows) {
            (scan_.x(r, static_cast<std::size_t>(split.feature)) <= split.threshold ? left : right).push_back(r);
        }
        rows.clear();
        rows.shrink_to_fit();
        const int l = grow(std::move(left), depth + 1);
        const int r = grow(std::move(right), depth + 1);
        TreeNode& node = tree_.nodes[static_cast<std::size_t>(id)];
        node.feature = split.feature;
        node.threshold = split.threshold;
        node.left = l;
        node.right = r;
        return id;
    }

    SplitScan scan_;
    int max_depth_;
    TreeParams tree_;
};

double tree_predict(const TreeParams& t, std::span<const double> x) {
    std::size_t id = 0;
    for (;;) {
        const TreeNode& n = t.nodes[id];
        if (n.feature < 0) return n.leaf_value;
        id = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
    }
}

// --------------------------------------------------------------------- knn

double knn_predict(const KnnParams& m, std::span<const double> x, bool classification, int n_classes) {
    const Matrix& train = m.train;
    std::vector<std::pair<double, std::size_t>> dist(train.rows);
    for (std::size_t r = 0; r < train.rows; ++r) {
        const auto row = train.row(r);
        double d = 0.0;
        for (std::size_t j = 0; j < train.cols; ++j) {
            const double diff = row[j] - x[j];
            d += diff * diff;
        }
        dist[r] = {d, r};
    }
    const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(m.k), dist.size());
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
    if (classification) {
        std::vector<std::size_t> votes(static_cast<std::size_t>(n_classes), 0);
        for (std::size_t i = 0; i < k; ++i) ++votes[static_cast<std::size_t>(m.targets[dist[i].second])];
        return static_cast<double>(std::max_element(votes.begin(), votes.end()) - votes.begin());
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) sum += m.targets[dist[i].second];
    return k ? sum / static_cast<double>(k) : 0.0;
}

}  // namespace

double gini(std::span<const double> counts, double total) {
    if (total <= 0) return 0.0;
    double s = 1.0;
    for (double c : counts) s -= (c / total) * (c / total);
    return s;
}

SplitChoice best_split(const Matrix& x, std::span<const double> y, std::span<const std::size_t> rows,
                       bool classification, int n_classes) {
    return SplitScan{x, y, classification, n_classes}.best(rows);
}

FittedModel fit(const Candidate& candidate, const Matrix& x, std::span<const double> y, int n_classes) {
    if (y.size() != x.rows) throw FitError("target length does not match row count");
    if (x.rows == 0) throw FitError("cannot fit on zero rows");
    for (double v : x.values) {
        if (!std::isfinite(v)) throw FitError("non-finite feature value");
    }
    const bool classification = model_task(candidate.kind) == TaskKind::Classification;
    if (classification) {
        if (n_classes < 1) throw FitError("classification needs at least one class");
        for (double v : y) {
            if (v < 0 || v >= n_classes || v != std::floor(v)) throw FitError("class id out of range");
        }
    }
    FittedModel m;
    m.kind = candidate.kind;
    m.n_classes = classification ? n_classes : 0;
    std::vector<std::size_t> all(x.rows);
    std::iota(all.begin(), all.end(), std::size_t{0});
    switch (candidate.kind) {
        case ModelKind::LogisticRegression:
            m.params = fit_logistic(x, y, n_classes, candidate.param("l2"));
            break;
        case ModelKind::RidgeRegression:
            m.params = fit_ridge(x, y, candidate.param("l2"));
            break;
        case ModelKind::DecisionTreeClassifier:
        case ModelKind::DecisionTreeRegressor:
            m.params = TreeBuilder(x, y, classification, n_classes, static_cast<int>(candidate.param("max_depth")))
                           .build(std::move(all));
            break;
        case ModelKind::KnnClassifier:
        case ModelKind::KnnRegressor:
            m.params = KnnParams{static_cast<int>(candidate.param("k")), x, std::vector<double>(y.begin(), y.end())};
            break;
    }
    return m;
}

double FittedModel::predict_row(std::span<const double> x) const {
    const bool classification = n_classes > 0;
    if (const auto* lin = std::get_if<LinearParams>(&params)) {
        if (lin->constant) return *lin->constant;
        if (kind == ModelKind::RidgeRegression) return dot(lin->weights[0], x) + lin->bias[0];
        if (lin->weights.size() == 1) return dot(lin->weights[0], x) + lin->bias[0] > 0.0 ? 1.0 : 0.0;
        std::size_t best = 0;
        double best_score = 0.0;
        for (std::size_t c = 0; c < lin->weights.size(); ++c) {
            const double s = dot(lin->weights[c], x) + lin->bias[c];
            if (c == 0 || s > best_score) {
                best = c;
                best_score = s;
            }
        }
        return static_cast<double>(best);
    }
    if (const auto* tree = std::get_if<TreeParams>(&params)) return tree_predict(*tree, x);
    return knn_predict(std::get<KnnParams>(params), x, classification, n_classes);
}

std::vector<double> FittedModel::predict(const Matrix& x) const {
    std::vector<double> out(x.rows);
    for (std::size_t r = 0; r < x.rows; ++r) out[r] = predict_row(x.row(r));
    return out;
}

}  // namespace zeroml
