#include "zeroml/automl.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <thread>

#include "zeroml/channel.hpp"
#include "zeroml/errors.hpp"

namespace zeroml {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void spin_for(std::chrono::milliseconds duration) {
    if (duration.count() <= 0) return;
    const auto until = Clock::now() + duration;
    volatile double sink = 0.0;
    while (Clock::now() < until) {
        for (int i = 0; i < 1000; ++i) sink = sink + std::sqrt(static_cast<double>(i));
    }
}

Candidate make_candidate(int index, ModelKind kind, std::string param, double value) {
    return Candidate{index, kind, {{std::move(param), value}}};
}

std::vector<int> class_ids(const Dataset& d, std::string_view target) {
    const auto labels = target_labels(d.column(target));
    std::vector<std::string> sorted = labels;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<int> ids(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        ids[i] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), labels[i]) - sorted.begin());
    }
    return ids;
}

bool better(double a, double b, Metric metric) { return higher_is_better(metric) ? a > b : a < b; }

}  // namespace

std::vector<Candidate> enumerate_candidates(TaskKind task) {
    const bool cls = task == TaskKind::Classification;
    const ModelKind linear = cls ? ModelKind::LogisticRegression : ModelKind::RidgeRegression;
    const ModelKind tree = cls ? ModelKind::DecisionTreeClassifier : ModelKind::DecisionTreeRegressor;
    const ModelKind knn = cls ? ModelKind::KnnClassifier : ModelKind::KnnRegressor;
    std::vector<Candidate> out;
    for (double l2 : {0.0, 0.1}) out.push_back(make_candidate(static_cast<int>(out.size()), linear, "l2", l2));
    for (double depth : {3.0, 6.0, 10.0}) {
        out.push_back(make_candidate(static_cast<int>(out.size()), tree, "max_depth", depth));
    }
    for (double k : {3.0, 7.0}) out.push_back(make_candidate(static_cast<int>(out.size()), knn, "k", k));
    return out;
}

std::string_view status_name(CandidateStatus s) {
    switch (s) {
        case CandidateStatus::Done: return "done";
        case CandidateStatus::SkippedDeadline: return "skipped_deadline";
        case CandidateStatus::Failed: return "failed";
    }
    return "?";
}

Report without_timings(Report r) {
    r.total_seconds = 0.0;
    for (auto& row : r.rows) row.fit_seconds = 0.0;
    return r;
}

std::string render_report(const Report& r, bool test_mode) {
    std::string out;
    char line[512];
    std::snprintf(line, sizeof line, "ZeroML report: task=%s metric=%s target=%s rows=%zu features=%zu\n",
                  std::string(task_name(r.task)).c_str(), std::string(metric_name(r.metric)).c_str(),
                  r.target.c_str(), r.n_rows, r.n_features);
    out += line;
    std::snprintf(line, sizeof line, "folds=%d seed=%lld preprocess=%s roster=%s", r.folds,
                  static_cast<long long>(r.seed), r.preprocess.c_str(), r.roster_version.c_str());
    out += line;
    if (!test_mode) {
        std::snprintf(line, sizeof line, " threads=%d wall=%.3fs", r.threads, r.total_seconds);
        out += line;
    }
    out += "\n";
    std::snprintf(line, sizeof line, "%-5s %-24s %-14s %-21s %9s  %s\n", "rank", "model", "params",
                  "mean +/- std", "fit_s", "status");
    out += line;

    std::vector<const CandidateResult*> order;
    for (const auto& row : r.rows) order.push_back(&row);
    std::stable_sort(order.begin(), order.end(), [&](const CandidateResult* a, const CandidateResult* b) {
        const bool a_done = a->status == CandidateStatus::Done;
        const bool b_done = b->status == CandidateStatus::Done;
        if (a_done != b_done) return a_done;
        if (!a_done) return a->candidate.index < b->candidate.index;
        if (a->mean_score != b->mean_score) return better(a->mean_score, b->mean_score, r.metric);
        return a->candidate.index < b->candidate.index;
    });

    int rank = 0;
    for (const CandidateResult* row : order) {
        const bool done = row->status == CandidateStatus::Done;
        std::string rank_text = done ? std::to_string(++rank) : "-";
        if (row->candidate.index == r.best_index) rank_text += "*";
        std::string score_text = "-";
        if (done) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.6f +/- %.6f", row->mean_score, row->std_score);
            score_text = buf;
        }
        std::string status = "done";
        if (row->status == CandidateStatus::SkippedDeadline) status = "skipped (deadline)";
        if (row->status == CandidateStatus::Failed) status = "failed: " + row->message;
        const double fit_s = test_mode ? 0.0 : row->fit_seconds;
        std::snprintf(line, sizeof line, "%-5s %-24s %-14s %-21s %9.3f  %s\n", rank_text.c_str(),
                      std::string(model_kind_name(row->candidate.kind)).c_str(),
                      row->candidate.describe_params().c_str(), score_text.c_str(), fit_s, status.c_str());
        out += line;
    }
    return out;
}

std::vector<double> TrainedModel::predict(const Dataset& d) const {
    const Design design = apply_schema(schema, d);
    return model.predict(design.features);
}

std::string TrainedModel::label(double prediction) const {
    if (schema.task == TaskKind::Regression) return format_number(prediction);
    return schema.classes.at(static_cast<std::size_t>(prediction));
}

Dataset TrainedModel::predict_dataset(const Dataset& d) const {
    const auto predictions = predict(d);
    std::vector<Column> cols;
    if (schema.task == TaskKind::Regression) {
        cols.push_back(Column::numeric("prediction", predictions));
    } else {
        std::vector<std::optional<std::string>> labels;
        labels.reserve(predictions.size());
        for (double p : predictions) labels.emplace_back(label(p));
        cols.push_back(Column::categorical("prediction", labels));
    }
    return Dataset(std::move(cols));
}

std::string TrainedModel::summary() const {
    return "<Model " + std::string(model_kind_name(candidate.kind)) + "(" + candidate.describe_params() +
           ") task=" + std::string(task_name(schema.task)) + " " + std::string(metric_name(metric)) + "=" +
           format_number(cv_score) + ">";
}

std::shared_ptr<const FoldData> FoldCache::get_or_build(std::string_view preprocess, std::size_t fold,
                                                        const std::function<FoldData()>& build) {
    const auto key = std::make_pair(std::string(preprocess), fold);
    {
        std::lock_guard lock(mutex_);
        if (auto it = entries_.find(key); it != entries_.end()) return it->second;
    }
    auto value = std::make_shared<const FoldData>(build());
    std::lock_guard lock(mutex_);
    ++builds_;
    entries_[key] = value;
    return value;
}

std::size_t FoldCache::size() const {
    std::lock_guard lock(mutex_);
    return entries_.size();
}

std::size_t FoldCache::builds() const {
    std::lock_guard lock(mutex_);
    return builds_;
}

FoldPlan make_fold_plan(const Dataset& d, std::string_view target, TaskKind task, int folds, std::int64_t seed) {
    if (folds < 2) throw FoldError("folds must be at least 2");
    if (task == TaskKind::Classification) {
        const auto ids = class_ids(d, target);
        return kfold(d.n_rows(), static_cast<std::size_t>(folds), std::span<const int>(ids), seed);
    }
    return kfold(d.n_rows(), static_cast<std::size_t>(folds), std::nullopt, seed);
}

FoldData build_fold(const CvSetup& setup, std::size_t fold) {
    const auto train_rows = setup.plan.training_rows(fold);
    const Dataset train = setup.data->select_rows(train_rows);
    const Dataset test = setup.data->select_rows(setup.plan.folds.at(fold));
    FoldData out;
    out.schema = fit_schema(train, setup.target, setup.preprocess, setup.task);
    out.train = apply_schema(out.schema, train);
    out.test = apply_schema(out.schema, test);
    return out;
}

CandidateResult cross_validate(const Candidate& candidate, const CvSetup& setup, std::int64_t /*seed*/) {
    // Every v1 learner is deterministic, so the per-candidate seed has no
    // consumer yet; it is part of the signature for stochastic learners.
    CandidateResult result;
    result.candidate = candidate;
    const auto start = Clock::now();
    try {
        if (model_task(candidate.kind) != setup.task) {
            throw FitError(std::string(model_kind_name(candidate.kind)) + " does not fit a " +
                           std::string(task_name(setup.task)) + " task");
        }
        for (std::size_t f = 0; f < setup.plan.folds.size(); ++f) {
            auto data = setup.cache ? setup.cache->get_or_build(setup.preprocess, f,
                                                                 [&] { return build_fold(setup, f); })
                                    : std::make_shared<const FoldData>(build_fold(setup, f));
            const int n_classes = static_cast<int>(data->schema.classes.size());
            const FittedModel m = fit(candidate, data->train.features, data->train.target, n_classes);
            spin_for(setup.fit_padding);
            const auto predictions = m.predict(data->test.features);
            result.fold_scores.push_back(score(setup.metric, data->test.target, predictions));
        }
        double sum = 0.0;
        for (double s : result.fold_scores) sum += s;
        result.mean_score = sum / static_cast<double>(result.fold_scores.size());
        double ss = 0.0;
        for (double s : result.fold_scores) ss += (s - result.mean_score) * (s - result.mean_score);
        result.std_score = std::sqrt(ss / static_cast<double>(result.fold_scores.size()));
        result.status = CandidateStatus::Done;
    } catch (const std::exception& e) {
        result.status = CandidateStatus::Failed;
        result.message = e.what();
        result.fold_scores.clear();
        result.mean_score = 0.0;
        result.std_score = 0.0;
    }
    result.fit_seconds = seconds_since(start);
    return result;
}

int select_best(std::span<const CandidateResult> rows, Metric metric) {
    int best = -1;
    bool any_skipped = false;
    std::string first_failure;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (row.status == CandidateStatus::SkippedDeadline) any_skipped = true;
        if (row.status == CandidateStatus::Failed && first_failure.empty()) first_failure = row.message;
        if (row.status != CandidateStatus::Done) continue;
        if (best < 0) {
            best = static_cast<int>(i);
            continue;
        }
        const auto& incumbent = rows[static_cast<std::size_t>(best)];
        // ties go to the lower candidate index, whatever order rows arrived in
        if (better(row.mean_score, incumbent.mean_score, metric) ||
            (row.mean_score == incumbent.mean_score && row.candidate.index < incumbent.candidate.index)) {
            best = static_cast<int>(i);
        }
    }
    if (best < 0) {
        if (any_skipped) throw DeadlineError("max_time elapsed before any candidate completed");
        throw FitError("every candidate failed; first failure: " + first_failure);
    }
    return best;
}

TrainedModel fit_pipeline(const Dataset& d, std::string_view target, std::string_view preprocess, TaskKind task,
                          const Candidate& candidate) {
    TrainedModel out;
    out.schema = fit_schema(d, target, preprocess, task);
    out.candidate = candidate;
    const Design design = apply_schema(out.schema, d);
    out.model = fit(candidate, design.features, design.target, static_cast<int>(out.schema.classes.size()));
    return out;
}

SearchOutcome search(const Dataset& cleaned, const AutomlParams& params, const SearchOptions& options) {
    const auto start = Clock::now();
    const Column& target_col = cleaned.column(params.target);
    (void)target_col;
    TaskKind task;
    if (params.task == "auto") {
        task = infer_task(cleaned, params.target);
    } else if (auto parsed = parse_task(params.task)) {
        task = *parsed;
    } else {
        throw SchemaError("unknown task '" + params.task + "' (expected auto, classification or regression)");
    }
    const Metric metric = resolve_metric(params.evaluation, task);
    if (params.preprocess != "standard" && params.preprocess != "none") {
        throw SchemaError("unsupported preprocess '" + params.preprocess + "' (expected \"standard\" or \"none\")");
    }
    if (cleaned.n_cols() < 2) throw CleanError("no feature columns besides the target");
    if (params.max_time < 0) throw SchemaError("max_time must be >= 0");

    std::vector<Candidate> roster = options.roster ? *options.roster : enumerate_candidates(task);
    for (std::size_t i = 0; i < roster.size(); ++i) roster[i].index = static_cast<int>(i);

    FoldCache cache;
    CvSetup setup;
    setup.data = &cleaned;
    setup.target = params.target;
    setup.task = task;
    setup.preprocess = params.preprocess;
    setup.metric = metric;
    setup.plan = make_fold_plan(cleaned, params.target, task, params.folds, params.seed);
    setup.cache = &cache;
    setup.fit_padding = options.fit_padding;

    const int threads = std::max(1, options.threads);
    std::atomic<std::size_t> cursor{0};
    Channel<CandidateResult> results;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= roster.size()) return;
            if (params.max_time > 0.0 && seconds_since(start) >= params.max_time) {
                CandidateResult skipped;
                skipped.candidate = roster[i];
                skipped.status = CandidateStatus::SkippedDeadline;
                results.send(std::move(skipped));
                continue;
            }
            results.send(cross_validate(roster[i], setup, params.seed + roster[i].index));
        }
    };
    std::vector<CandidateResult> rows(roster.size());
    {
        std::vector<std::jthread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (std::size_t received = 0; received < roster.size(); ++received) {
            CandidateResult r = results.receive();
            const auto slot = static_cast<std::size_t>(r.candidate.index);
            rows[slot] = std::move(r);
        }
    }

    Report report;
    report.task = task;
    report.metric = metric;
    report.target = params.target;
    report.preprocess = params.preprocess;
    report.rows = std::move(rows);
    report.best_index = select_best(report.rows, metric);
    report.folds = params.folds;
    report.seed = params.seed;
    report.threads = threads;
    report.n_rows = cleaned.n_rows();

    const CandidateResult& best = report.best();
    TrainedModel model = fit_pipeline(cleaned, params.target, params.preprocess, task, best.candidate);
    model.metric = metric;
    model.cv_score = best.mean_score;
    model.seed = params.seed;
    report.n_features = model.schema.feature_count();
    report.total_seconds = seconds_since(start);
    model.report = std::make_shared<const Report>(report);
    return SearchOutcome{std::move(model), std::move(report)};
}

SearchOutcome run_automl(const Dataset& raw, const AutomlParams& params, const SearchOptions& options) {
    const Dataset labelled = raw.without_rows_missing(params.target);
    const Dataset cleaned = clean(labelled);
    if (!cleaned.find(params.target)) throw CleanError("target column '" + params.target + "' was dropped");
    return search(cleaned, params, options);
}

}  // namespace zeroml
