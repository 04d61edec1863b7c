#pragma once

#include <optional>
#include <span>
#include <string_view>

#include "zeroml/schema.hpp"

namespace zeroml {

enum class Metric { Accuracy, F1Macro, Rmse, R2 };

std::string_view metric_name(Metric m);
std::optional<Metric> parse_metric_name(std::string_view name);

/// "auto" maps to accuracy (classification) or rmse (regression).
/// Throws MetricError on unknown names and task/metric mismatches.
Metric resolve_metric(std::string_view name, TaskKind task);

bool higher_is_better(Metric m);

/// Throws MetricError on length mismatch or empty input.
double score(Metric metric, std::span<const double> y_true, std::span<const double> y_pred);
double score(TaskKind task, std::string_view metric, std::span<const double> y_true, std::span<const double> y_pred);

double accuracy(std::span<const double> y_true, std::span<const double> y_pred);
/// Unweighted mean of per-class F1 over every class present in y_true or y_pred.
double macro_f1(std::span<const double> y_true, std::span<const double> y_pred);
double rmse(std::span<const double> y_true, std::span<const double> y_pred);
/// 1 - SSres/SStot, defined as 0 when SStot is 0.
double r2(std::span<const double> y_true, std::span<const double> y_pred);

}  // namespace zeroml
