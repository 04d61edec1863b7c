#include "zeroml/metrics.hpp"

#include <cmath>
#include <map>
#include <string>

#include "zeroml/errors.hpp"

namespace zeroml {

std::string_view metric_name(Metric m) {
    switch (m) {
        case Metric::Accuracy: return "accuracy";
        case Metric::F1Macro: return "f1";
        case Metric::Rmse: return "rmse";
        case Metric::R2: return "r2";
    }
    return "?";
}

std::optional<Metric> parse_metric_name(std::string_view name) {
    if (name == "accuracy") return Metric::Accuracy;
    if (name == "f1") return Metric::F1Macro;
    if (name == "rmse") return Metric::Rmse;
    if (name == "r2") return Metric::R2;
    return std::nullopt;
}

Metric resolve_metric(std::string_view name, TaskKind task) {
    if (name == "auto") return task == TaskKind::Classification ? Metric::Accuracy : Metric::Rmse;
    auto m = parse_metric_name(name);
    if (!m) {
        throw MetricError("unknown evaluation metric '" + std::string(name) +
                          "' (expected auto, accuracy, f1, rmse or r2)");
    }
    const bool for_classification = *m == Metric::Accuracy || *m == Metric::F1Macro;
    if (for_classification != (task == TaskKind::Classification)) {
        throw MetricError("metric '" + std::string(name) + "' does not apply to " + std::string(task_name(task)));
    }
    return *m;
}

bool higher_is_better(Metric m) { return m != Metric::Rmse; }

namespace {

void check_lengths(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw MetricError("y_true and y_pred lengths differ");
    if (a.empty()) throw MetricError("cannot score zero predictions");
}

}  // namespace

double accuracy(std::span<const double> y_true, std::span<const double> y_pred) {
    check_lengths(y_true, y_pred);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < y_true.size(); ++i) correct += y_true[i] == y_pred[i] ? 1 : 0;
    return static_cast<double>(correct) / static_cast<double>(y_true.size());
}

double macro_f1(std::span<const double> y_true, std::span<const double> y_pred) {
    check_lengths(y_true, y_pred);
    struct Counts {
        double tp = 0, fp = 0, fn = 0;
    };
    std::map<double, Counts> per_class;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        if (y_true[i] == y_pred[i]) {
            per_class[y_true[i]].tp += 1;
        } else {
            per_class[y_true[i]].fn += 1;
            per_class[y_pred[i]].fp += 1;
        }
    }
    double sum = 0.0;
    for (const auto& [label, c] : per_class) sum += 2 * c.tp / (2 * c.tp + c.fp + c.fn);
    return sum / static_cast<double>(per_class.size());
}

double rmse(std::span<const double> y_true, std::span<const double> y_pred) {
    check_lengths(y_true, y_pred);
    double ss = 0.0;
    for (std::size_t i = 0; i < y_true.size(); ++i) ss += (y_true[i] - y_pred[i]) * (y_true[i] - y_pred[i]);
    return std::sqrt(ss / static_cast<double>(y_true.size()));
}

double r2(std::span<const double> y_true, std::span<const double> y_pred) {
    check_lengths(y_true, y_pred);
    double mean = 0.0;
    for (double v : y_true) mean += v;
    mean /= static_cast<double>(y_true.size());
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        ss_res += (y_true[i] - y_pred[i]) * (y_true[i] - y_pred[i]);
        ss_tot += (y_true[i] - mean) * (y_true[i] - mean);
    }
    if (ss_tot == 0.0) return 0.0;
    return 1.0 - ss_res / ss_tot;
}

double score(Metric metric, std::span<const double> y_true, std::span<const double> y_pred) {
    switch (metric) {
        case Metric::Accuracy: return accuracy(y_true, y_pred);
        case Metric::F1Macro: return macro_f1(y_true, y_pred);
        case Metric::Rmse: return rmse(y_true, y_pred);
        case Metric::R2: return r2(y_true, y_pred);
    }
    return 0.0;
}

double score(TaskKind task, std::string_view metric, std::span<const double> y_true, std::span<const double> y_pred) {
    return score(resolve_metric(metric, task), y_true, y_pred);
}

}  // namespace zeroml
