#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <mutex>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "zeroml/dataset.hpp"
#include "zeroml/folds.hpp"
#include "zeroml/metrics.hpp"
#include "zeroml/models.hpp"
#include "zeroml/schema.hpp"

namespace zeroml {

/// Bumped whenever the candidate roster or its order changes.
inline constexpr std::string_view kRosterVersion = "v1";

/// The fixed, ordered search roster for a task (7 candidates).
std::vector<Candidate> enumerate_candidates(TaskKind task);

enum class CandidateStatus { Done, SkippedDeadline, Failed };

std::string_view status_name(CandidateStatus s);

struct CandidateResult {
    Candidate candidate;
    std::vector<double> fold_scores;
    double mean_score = 0.0;
    double std_score = 0.0;  // population std over fold_scores
    double fit_seconds = 0.0;
    CandidateStatus status = CandidateStatus::Done;
    std::string message;  // failure reason
};

struct Report {
    TaskKind task = TaskKind::Classification;
    Metric metric = Metric::Accuracy;
    std::string target;
    std::string preprocess;
    std::vector<CandidateResult> rows;  // candidate-index order
    int best_index = -1;
    std::size_t n_rows = 0;
    std::size_t n_features = 0;
    int folds = 0;
    std::int64_t seed = 0;
    int threads = 1;
    double total_seconds = 0.0;
    std::string roster_version{kRosterVersion};

    const CandidateResult& best() const { return rows.at(static_cast<std::size_t>(best_index)); }
};

/// Copy with every wall-clock field zeroed (byte-stable output in test mode).
Report without_timings(Report r);

/// Fixed-width table, rows ranked by score, best marked with '*'. With
/// test_mode the header omits thread count and wall time.
std::string render_report(const Report& r, bool test_mode);

/// A trained pipeline: frozen schema plus fitted learner. Immutable.
struct TrainedModel {
    FeatureSchema schema;
    Candidate candidate;
    FittedModel model;
    Metric metric = Metric::Accuracy;
    double cv_score = 0.0;
    std::int64_t seed = 0;
    std::string roster_version{kRosterVersion};
    std::shared_ptr<const Report> report;

    TaskKind task() const { return schema.task; }

    /// Class ids (classification) or values (regression), one per row.
    std::vector<double> predict(const Dataset& d) const;
    /// One column named "prediction": class labels or numbers.
    Dataset predict_dataset(const Dataset& d) const;
    std::string label(double prediction) const;
    std::string summary() const;
};

/// Arguments of the automl builtin.
struct AutomlParams {
    std::string target;
    std::string task = "auto";
    std::string preprocess = "standard";
    double max_time = 0.0;  // seconds; 0 means unlimited
    std::string evaluation = "auto";
    int folds = 5;
    std::int64_t seed = 42;
};

struct SearchOptions {
    int threads = 1;
    /// Replaces the task roster (candidate indices are reassigned 0..n-1).
    std::optional<std::vector<Candidate>> roster;
    /// Busy work added after every fold fit.
    std::chrono::milliseconds fit_padding{0};
};

/// Per-fold preprocessed matrices, fitted on the training part only.
struct FoldData {
    FeatureSchema schema;
    Design train;
    Design test;
};

/// Memo of (preprocess, fold) -> FoldData shared read-only by search workers.
/// Values are deterministic, so a racing duplicate insert is harmless.
class FoldCache {
public:
    std::shared_ptr<const FoldData> get_or_build(std::string_view preprocess, std::size_t fold,
                                                 const std::function<FoldData()>& build);
    std::size_t size() const;
    std::size_t builds() const;

private:
    mutable std::mutex mutex_;
    std::map<std::pair<std::string, std::size_t>, std::shared_ptr<const FoldData>> entries_;
    std::size_t builds_ = 0;
};

/// Everything cross-validation needs besides the candidate.
struct CvSetup {
    const Dataset* data = nullptr;  // cleaned
    std::string target;
    TaskKind task = TaskKind::Classification;
    std::string preprocess = "standard";
    Metric metric = Metric::Accuracy;
    FoldPlan plan;
    FoldCache* cache = nullptr;
    std::chrono::milliseconds fit_padding{0};
};

/// Builds the shared fold plan: stratified on the target for classification.
FoldPlan make_fold_plan(const Dataset& d, std::string_view target, TaskKind task, int folds, std::int64_t seed);

FoldData build_fold(const CvSetup& setup, std::size_t fold);

/// Scores one candidate on every fold. Failures are captured in the result.
CandidateResult cross_validate(const Candidate& candidate, const CvSetup& setup, std::int64_t seed);

/// Position of the best Done row (ties to the lower candidate index). Throws DeadlineError
/// when nothing completed because of the deadline, FitError when all failed.
int select_best(std::span<const CandidateResult> rows, Metric metric);

struct SearchOutcome {
    TrainedModel model;
    Report report;
};

/// Parallel search over the roster on a cleaned dataset, then a refit of the
/// winner on all rows.
SearchOutcome search(const Dataset& cleaned, const AutomlParams& params, const SearchOptions& options);

/// The automl builtin: drops rows with a missing target, cleans, searches.
SearchOutcome run_automl(const Dataset& raw, const AutomlParams& params, const SearchOptions& options);

/// Fits schema and learner on every row of `d`.
TrainedModel fit_pipeline(const Dataset& d, std::string_view target, std::string_view preprocess, TaskKind task,
                          const Candidate& candidate);

}  // namespace zeroml
