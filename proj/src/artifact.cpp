#include "zeroml/artifact.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

#include "zeroml/errors.hpp"

namespace zeroml {

using nlohmann::json;

namespace {

json matrix_to_json(const Matrix& m) {
    return json{{"rows", m.rows}, {"cols", m.cols}, {"values", m.values}};
}

Matrix matrix_from_json(const json& j) {
    Matrix m;
    m.rows = j.at("rows").get<std::size_t>();
    m.cols = j.at("cols").get<std::size_t>();
    m.values = j.at("values").get<std::vector<double>>();
    if (m.values.size() != m.rows * m.cols) throw FormatError("matrix values do not match its shape");
    return m;
}

TransformKind transform_from_name(const std::string& name) {
    for (auto k : {TransformKind::Standardize, TransformKind::OneHot, TransformKind::Passthrough}) {
        if (transform_name(k) == name) return k;
    }
    throw FormatError("unknown transform '" + name + "'");
}

json candidate_to_json(const Candidate& c) {
    json params = json::object();
    for (const auto& [k, v] : c.hyperparams) params[k] = v;
    return json{{"index", c.index}, {"model_kind", model_kind_name(c.kind)}, {"hyperparams", params}};
}

Candidate candidate_from_json(const json& j) {
    Candidate c;
    c.index = j.at("index").get<int>();
    auto kind = parse_model_kind(j.at("model_kind").get<std::string>());
    if (!kind) throw FormatError("unknown model_kind '" + j.at("model_kind").get<std::string>() + "'");
    c.kind = *kind;
    for (const auto& [k, v] : j.at("hyperparams").items()) c.hyperparams[k] = v.get<double>();
    return c;
}

json params_to_json(const FittedModel& m) {
    if (const auto* lin = std::get_if<LinearParams>(&m.params)) {
        json j{{"type", "linear"}, {"weights", lin->weights}, {"bias", lin->bias}};
        j["constant"] = lin->constant ? json(*lin->constant) : json(nullptr);
        return j;
    }
    if (const auto* tree = std::get_if<TreeParams>(&m.params)) {
        json nodes = json::array();
        for (const auto& n : tree->nodes) {
            nodes.push_back({{"feature", n.feature},
                             {"threshold", n.threshold},
                             {"left", n.left},
                             {"right", n.right},
                             {"leaf_value", n.leaf_value}});
        }
        return json{{"type", "tree"}, {"nodes", nodes}};
    }
    const auto& knn = std::get<KnnParams>(m.params);
    return json{{"type", "knn"}, {"k", knn.k}, {"train", matrix_to_json(knn.train)}, {"targets", knn.targets}};
}

ModelParams params_from_json(const json& j, std::size_t n_features) {
    const auto type = j.at("type").get<std::string>();
    if (type == "linear") {
        LinearParams p;
        p.weights = j.at("weights").get<std::vector<std::vector<double>>>();
        p.bias = j.at("bias").get<std::vector<double>>();
        if (!j.at("constant").is_null()) p.constant = j.at("constant").get<double>();
        if (p.weights.size() != p.bias.size()) throw FormatError("linear weights/bias count mismatch");
        for (const auto& w : p.weights) {
            if (w.size() != n_features) throw FormatError("linear weight width does not match schema");
        }
        if (!p.constant && p.weights.empty()) throw FormatError("linear model without weights");
        return p;
    }
    if (type == "tree") {
        TreeParams p;
        for (const auto& n : j.at("nodes")) {
            p.nodes.push_back(TreeNode{n.at("feature").get<int>(), n.at("threshold").get<double>(),
                                       n.at("left").get<int>(), n.at("right").get<int>(),
                                       n.at("leaf_value").get<double>()});
        }
        const auto count = static_cast<int>(p.nodes.size());
        if (count == 0) throw FormatError("tree without nodes");
        for (const auto& n : p.nodes) {
            if (n.feature >= static_cast<int>(n_features)) throw FormatError("tree feature index out of range");
            // Children always come after their parent, which also rules out cycles.
            if (n.feature >= 0 && (n.left <= 0 || n.right <= 0 || n.left >= count || n.right >= count)) {
                throw FormatError("tree child index out of range");
            }
        }
        return p;
    }
    if (type == "knn") {
        KnnParams p;
        p.k = j.at("k").get<int>();
        p.train = matrix_from_json(j.at("train"));
        p.targets = j.at("targets").get<std::vector<double>>();
        if (p.k < 1 || p.targets.size() != p.train.rows || p.train.cols != n_features) {
            throw FormatError("inconsistent knn parameters");
        }
        return p;
    }
    throw FormatError("unknown parameter type '" + type + "'");
}

}  // namespace

json schema_to_json(const FeatureSchema& s) {
    json inputs = json::array();
    for (const auto& t : s.inputs) {
        json c{{"column", t.column}, {"transform", transform_name(t.kind)}};
        if (t.kind == TransformKind::OneHot) {
            c["categories"] = t.categories;
        } else {
            c["mean"] = t.mean;
            c["std"] = t.std;
        }
        inputs.push_back(std::move(c));
    }
    json target{{"name", s.target}, {"kind", s.task == TaskKind::Classification ? "classes" : "numeric"}};
    if (s.task == TaskKind::Classification) target["classes"] = s.classes;
    return json{{"input_columns", inputs}, {"target", target}};
}

FeatureSchema schema_from_json(const json& j) {
    FeatureSchema s;
    for (const auto& c : j.at("input_columns")) {
        ColumnTransform t;
        t.column = c.at("column").get<std::string>();
        t.kind = transform_from_name(c.at("transform").get<std::string>());
        if (t.kind == TransformKind::OneHot) {
            t.categories = c.at("categories").get<std::vector<std::string>>();
        } else {
            t.mean = c.at("mean").get<double>();
            t.std = c.at("std").get<double>();
        }
        s.inputs.push_back(std::move(t));
    }
    const json& target = j.at("target");
    s.target = target.at("name").get<std::string>();
    const auto kind = target.at("kind").get<std::string>();
    if (kind == "classes") {
        s.task = TaskKind::Classification;
        s.classes = target.at("classes").get<std::vector<std::string>>();
    } else if (kind == "numeric") {
        s.task = TaskKind::Regression;
    } else {
        throw FormatError("unknown target kind '" + kind + "'");
    }
    return s;
}

json report_to_json(const Report& r) {
    json rows = json::array();
    for (const auto& row : r.rows) {
        rows.push_back({{"candidate", candidate_to_json(row.candidate)},
                        {"fold_scores", row.fold_scores},
                        {"mean_score", row.mean_score},
                        {"std_score", row.std_score},
                        {"fit_seconds", row.fit_seconds},
                        {"status", status_name(row.status)},
                        {"message", row.message}});
    }
    return json{{"format_version", kArtifactFormatVersion},
                {"task", task_name(r.task)},
                {"metric", metric_name(r.metric)},
                {"target", r.target},
                {"preprocess", r.preprocess},
                {"rows", rows},
                {"best_index", r.best_index},
                {"dataset", {{"rows", r.n_rows}, {"features", r.n_features}}},
                {"folds", r.folds},
                {"seed", r.seed},
                {"threads", r.threads},
                {"total_seconds", r.total_seconds},
                {"roster_version", r.roster_version}};
}

Report report_from_json(const json& j) {
    Report r;
    auto task = parse_task(j.at("task").get<std::string>());
    auto metric = parse_metric_name(j.at("metric").get<std::string>());
    if (!task || !metric) throw FormatError("report has unknown task or metric");
    r.task = *task;
    r.metric = *metric;
    r.target = j.at("target").get<std::string>();
    r.preprocess = j.at("preprocess").get<std::string>();
    for (const auto& row : j.at("rows")) {
        CandidateResult c;
        c.candidate = candidate_from_json(row.at("candidate"));
        c.fold_scores = row.at("fold_scores").get<std::vector<double>>();
        c.mean_score = row.at("mean_score").get<double>();
        c.std_score = row.at("std_score").get<double>();
        c.fit_seconds = row.at("fit_seconds").get<double>();
        const auto status = row.at("status").get<std::string>();
        if (status == "done") {
            c.status = CandidateStatus::Done;
        } else if (status == "skipped_deadline") {
            c.status = CandidateStatus::SkippedDeadline;
        } else if (status == "failed") {
            c.status = CandidateStatus::Failed;
        } else {
            throw FormatError("unknown candidate status '" + status + "'");
        }
        c.message = row.at("message").get<std::string>();
        r.rows.push_back(std::move(c));
    }
    r.best_index = j.at("best_index").get<int>();
    r.n_rows = j.at("dataset").at("rows").get<std::size_t>();
    r.n_features = j.at("dataset").at("features").get<std::size_t>();
    r.folds = j.at("folds").get<int>();
    r.seed = j.at("seed").get<std::int64_t>();
    r.threads = j.at("threads").get<int>();
    r.total_seconds = j.at("total_seconds").get<double>();
    r.roster_version = j.at("roster_version").get<std::string>();
    return r;
}

std::string artifact_timestamp() {
    std::time_t t;
    if (const char* epoch = std::getenv(kTestEpochEnv); epoch && *epoch) {
        t = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
    } else {
        t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    }
    std::tm utc{};
    gmtime_r(&t, &utc);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
    return buf;
}

json artifact_to_json(const TrainedModel& m, std::optional<std::string> created_at) {
    json j{{"format_version", kArtifactFormatVersion},
           {"task", task_name(m.schema.task)},
           {"metric", {{"name", metric_name(m.metric)}, {"cv_score", m.cv_score}}},
           {"roster_version", m.roster_version},
           {"seed", m.seed},
           {"created_at", created_at ? *created_at : artifact_timestamp()},
           {"feature_schema", schema_to_json(m.schema)},
           {"candidate", candidate_to_json(m.candidate)},
           {"model_kind", model_kind_name(m.candidate.kind)},
           {"parameters", params_to_json(m.model)}};
    j["report"] = m.report ? report_to_json(*m.report) : json(nullptr);
    return j;
}

TrainedModel artifact_from_json(const json& j) {
    try {
        if (!j.is_object()) throw FormatError("artifact is not a JSON object");
        const auto version = j.at("format_version").get<int>();
        if (version != kArtifactFormatVersion) {
            throw FormatError("unsupported artifact format_version " + std::to_string(version) + " (expected " +
                              std::to_string(kArtifactFormatVersion) + ")");
        }
        TrainedModel m;
        m.schema = schema_from_json(j.at("feature_schema"));
        if (task_name(m.schema.task) != j.at("task").get<std::string>()) {
            throw FormatError("artifact task does not match its schema");
        }
        m.candidate = candidate_from_json(j.at("candidate"));
        if (model_kind_name(m.candidate.kind) != j.at("model_kind").get<std::string>()) {
            throw FormatError("model_kind does not match candidate");
        }
        if (model_task(m.candidate.kind) != m.schema.task) throw FormatError("model kind does not match task");
        auto metric = parse_metric_name(j.at("metric").at("name").get<std::string>());
        if (!metric) throw FormatError("unknown metric");
        m.metric = *metric;
        m.cv_score = j.at("metric").at("cv_score").get<double>();
        m.roster_version = j.at("roster_version").get<std::string>();
        m.seed = j.at("seed").get<std::int64_t>();
        m.model.kind = m.candidate.kind;
        m.model.n_classes = m.schema.task == TaskKind::Classification ? static_cast<int>(m.schema.classes.size()) : 0;
        m.model.params = params_from_json(j.at("parameters"), m.schema.feature_count());
        if (m.schema.task == TaskKind::Classification && m.schema.classes.empty()) {
            throw FormatError("classification artifact without classes");
        }
        if (j.contains("report") && !j.at("report").is_null()) {
            m.report = std::make_shared<const Report>(report_from_json(j.at("report")));
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed artifact: ") + e.what());
    }
}

std::string artifact_text(const TrainedModel& m, std::optional<std::string> created_at) {
    return artifact_to_json(m, std::move(created_at)).dump(2) + "\n";
}

void save_artifact(const TrainedModel& m, const std::filesystem::path& path) {
    const std::string text = artifact_text(m);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write artifact '" + path.string() + "'");
    out << text;
    out.close();
    if (!out) throw IoError("failed writing artifact '" + path.string() + "'");
}

TrainedModel parse_artifact(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError("artifact is not valid JSON at byte " + std::to_string(e.byte) + ": " + e.what(), e.byte);
    }
    return artifact_from_json(j);
}

TrainedModel load_artifact(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open artifact '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_artifact(buf.str());
}

}  // namespace zeroml
