// End-to-end acceptance run. Prints one line per criterion and exits non-zero
// if any criterion fails. Criterion 7 needs at least four cores and is
// skipped otherwise, or when ZEROML_SKIP_SOFT is set.

#include <httplib.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <regex>
#include <set>
#include <sstream>
#include <thread>

#include "oracles.hpp"
#include "support.hpp"
#include "zeroml/artifact.hpp"
#include "zeroml/automl.hpp"
#include "zeroml/builtins.hpp"
#include "zeroml/cli.hpp"
#include "zeroml/driver.hpp"
#include "zeroml/parser.hpp"
#include "zeroml/server.hpp"
#include "zeroml/vm.hpp"

#if !defined(ZEROML_CORPUS_DIR) || !defined(ZEROML_DOCS_DIR)
#error "ZEROML_CORPUS_DIR and ZEROML_DOCS_DIR must be defined"
#endif

namespace fs = std::filesystem;
using nlohmann::json;
using namespace zeroml;

namespace {

const fs::path kCorpus = ZEROML_CORPUS_DIR;
const fs::path kDocs = ZEROML_DOCS_DIR;

const std::string kCanonical =
    "let d = load(\"blobs.csv\");\n"
    "let m = automl(input=d, target=\"label\");\n"
    "m.report();\n"
    "deploy(m, \"file\", \"m.zmodel\");\n";

enum class Verdict { Pass, Fail, Skip };

struct Outcome {
    Verdict verdict = Verdict::Pass;
    std::string detail;
};

Outcome pass(std::string d) { return {Verdict::Pass, std::move(d)}; }
Outcome fail(std::string d) { return {Verdict::Fail, std::move(d)}; }

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<fs::path> corpus_files(const std::string& sub) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(kCorpus / sub))
        if (e.path().extension() == ".zml") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    return files;
}

/// "// expect: [CODE ]line:col" on the first line.
struct Expectation {
    std::string code;
    int line = 0;
    int col = 0;
};

std::optional<Expectation> expectation_of(const std::string& text) {
    static const std::regex re(R"(^// expect: (?:(E_[A-Z]+) )?(\d+):(\d+))");
    std::smatch m;
    if (!std::regex_search(text, m, re)) return std::nullopt;
    return Expectation{m[1].str(), std::stoi(m[2].str()), std::stoi(m[3].str())};
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

// ---------------------------------------------------------------------------

void note_productions(const Expr& e, std::set<std::string>& seen);

void note_productions(const Block& b, std::set<std::string>& seen);

void note_productions(const Stmt& s, std::set<std::string>& seen) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, LetDecl>) {
                seen.insert("declaration");
                note_productions(*n.init, seen);
            } else if constexpr (std::is_same_v<T, IfElse>) {
                seen.insert(n.else_block ? "if-else" : "if");
                note_productions(*n.cond, seen);
                note_productions(n.then_block, seen);
                if (n.else_block) note_productions(*n.else_block, seen);
            } else if constexpr (std::is_same_v<T, ForLoop>) {
                seen.insert("for-in");
                note_productions(*n.iterable, seen);
                note_productions(n.body, seen);
            } else {
                const bool call = std::holds_alternative<CallExpr>(n.expr->node) ||
                                  std::holds_alternative<MethodCallExpr>(n.expr->node);
                seen.insert(call ? "function-call" : "expression-statement");
                note_productions(*n.expr, seen);
            }
        },
        s.node);
}

void note_productions(const Block& b, std::set<std::string>& seen) {
    for (const auto& s : b.statements) note_productions(*s, seen);
}

void note_productions(const Expr& e, std::set<std::string>& seen) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, BinaryExpr>) {
                seen.insert(std::string("op") + std::string(binary_op_symbol(n.op)));
                note_productions(*n.lhs, seen);
                note_productions(*n.rhs, seen);
            } else if constexpr (std::is_same_v<T, CallExpr>) {
                for (const auto& a : n.args) note_productions(*a, seen);
                for (const auto& a : n.named_args) note_productions(*a.value, seen);
            } else if constexpr (std::is_same_v<T, MethodCallExpr>) {
                note_productions(*n.receiver, seen);
                for (const auto& a : n.args) note_productions(*a, seen);
            }
        },
        e.node);
}

Outcome grammar_conformance() {
    const auto accepted = corpus_files("accept");
    if (accepted.size() < 20) return fail(std::to_string(accepted.size()) + " accepted programs, need 20");
    std::set<std::string> seen;
    for (const auto& f : accepted) {
        const std::string src = testing::read_text(f);
        try {
            const Program p = parse_source(src);
            const Program q = parse_source(pretty_print(p));
            if (!structurally_equal(p, q)) return fail(f.filename().string() + " does not round-trip");
            for (const auto& s : p.statements) note_productions(*s, seen);
        } catch (const std::exception& e) {
            return fail(f.filename().string() + ": " + e.what());
        }
    }
    for (const char* need : {"declaration", "if-else", "for-in", "function-call", "expression-statement", "op+",
                             "op-", "op*", "op/"}) {
        if (!seen.count(need)) return fail(std::string("corpus never exercises ") + need);
    }

    const auto rejected = corpus_files("reject_parse");
    if (rejected.size() < 10) return fail(std::to_string(rejected.size()) + " near-miss programs, need 10");
    for (const auto& f : rejected) {
        const std::string src = testing::read_text(f);
        const auto want = expectation_of(src);
        if (!want) return fail(f.filename().string() + " lacks an expect line");
        try {
            parse_source(src);
            return fail(f.filename().string() + " was accepted");
        } catch (const ParseError& e) {
            if (e.line() != want->line || e.col() != want->col)
                return fail(f.filename().string() + " failed at " + std::to_string(e.line()) + ":" +
                            std::to_string(e.col()));
        } catch (const std::exception& e) {
            return fail(f.filename().string() + " raised a non-parse error: " + e.what());
        }
    }
    return pass(std::to_string(accepted.size()) + " programs round-trip, " + std::to_string(rejected.size()) +
                " near-misses rejected at the expected position");
}

// ---------------------------------------------------------------------------

double best_mean(const fs::path& report_json) {
    const json r = json::parse(testing::read_text(report_json));
    return r.at("rows").at(r.at("best_index").get<std::size_t>()).at("mean_score").get<double>();
}

Outcome classification_end_to_end() {
    const fs::path dir = testing::scratch_dir("accept-blobs");
    const std::string csv = testing::blobs_csv();
    testing::write_text(dir / "blobs.csv", csv);

    const Dataset d = testing::dataset_from(csv);
    Matrix x(d.n_rows(), 4);
    std::vector<double> y(d.n_rows());
    for (std::size_t r = 0; r < d.n_rows(); ++r) {
        for (std::size_t c = 0; c < 4; ++c) x(r, c) = d.columns()[c].numbers[r];
        y[r] = d.column("label").numbers[r];
    }
    const double centroid = oracle::nearest_centroid_accuracy(x, y, 2);
    if (centroid < 0.95) return fail("nearest-centroid oracle only reaches " + fmt("%.3f", centroid));

    testing::write_text(dir / "main.zml", kCanonical);
    const auto run = cli({"run", (dir / "main.zml").string(), "--workdir", dir.string(), "--report-out",
                          (dir / "report.json").string()});
    if (run.code != 0) return fail("exit " + std::to_string(run.code) + ": " + run.err);
    if (run.out.find("ZeroML report") == std::string::npos) return fail("no report on stdout");
    if (!fs::exists(dir / "m.zmodel")) return fail("artifact not written");
    const double best = best_mean(dir / "report.json");
    if (best < 0.95) return fail("best mean accuracy " + fmt("%.4f", best));
    return pass("best mean accuracy " + fmt("%.4f", best) + " (nearest centroid " + fmt("%.3f", centroid) + ")");
}

Outcome regression_end_to_end() {
    const fs::path dir = testing::scratch_dir("accept-linear");
    const std::string csv = testing::linear_csv(200, 0.1, 42);
    testing::write_text(dir / "linear.csv", csv);
    testing::write_text(dir / "main.zml",
                        "let d = load(\"linear.csv\");\nlet m = automl(input=d, target=\"y\");\nm.report();\n");
    const auto run = cli({"run", (dir / "main.zml").string(), "--workdir", dir.string(), "--report-out",
                          (dir / "report.json").string()});
    if (run.code != 0) return fail("exit " + std::to_string(run.code) + ": " + run.err);
    const double best = best_mean(dir / "report.json");
    if (best > 0.2) return fail("best cv rmse " + fmt("%.4f", best));

    // full-data refit of RidgeRegression(l2=0); weights mapped back to raw units
    const Dataset d = testing::dataset_from(csv);
    Candidate ridge;
    ridge.kind = ModelKind::RidgeRegression;
    ridge.hyperparams = {{"l2", 0.0}};
    const TrainedModel m = fit_pipeline(d, "y", "standard", TaskKind::Regression, ridge);
    const auto& lp = std::get<LinearParams>(m.model.params);
    std::vector<double> raw;
    for (std::size_t j = 0; j < m.schema.inputs.size(); ++j) raw.push_back(lp.weights[0][j] / m.schema.inputs[j].std);
    if (std::abs(raw[0] - 3.0) > 1e-2 || std::abs(raw[1] + 2.0) > 1e-2)
        return fail("ridge weights " + fmt("%.5f", raw[0]) + ", " + fmt("%.5f", raw[1]));

    Matrix x(d.n_rows(), 2);
    for (std::size_t r = 0; r < d.n_rows(); ++r) {
        x(r, 0) = d.column("x1").numbers[r];
        x(r, 1) = d.column("x2").numbers[r];
    }
    const auto want = oracle::ridge_normal_equations(x, d.column("y").numbers, 0.0);
    if (std::abs(raw[0] - want[0]) > 1e-8 || std::abs(raw[1] - want[1]) > 1e-8)
        return fail("ridge disagrees with the normal-equation oracle");
    return pass("best cv rmse " + fmt("%.4f", best) + ", ridge weights (" + fmt("%.4f", raw[0]) + ", " +
                fmt("%.4f", raw[1]) + ")");
}

Outcome determinism() {
    const fs::path dir = testing::scratch_dir("accept-determinism");
    testing::write_text(dir / "blobs.csv", testing::blobs_csv());
    testing::write_text(dir / "main.zml", kCanonical);
    std::vector<CliRun> runs;
    std::vector<int> best;
    for (const char* threads : {"1", "4"}) {
        const fs::path report = dir / (std::string("report-") + threads + ".json");
        runs.push_back(cli({"run", (dir / "main.zml").string(), "--workdir", dir.string(), "--test-mode",
                            "--threads", threads, "--report-out", report.string()}));
        if (runs.back().code != 0) return fail("threads=" + std::string(threads) + " exit " +
                                               std::to_string(runs.back().code));
        best.push_back(json::parse(testing::read_text(report)).at("best_index").get<int>());
    }
    if (runs[0].out != runs[1].out) return fail("stdout differs between 1 and 4 threads");
    if (best[0] != best[1]) return fail("selected candidate differs");
    return pass("stdout byte-identical (" + std::to_string(runs[0].out.size()) + " bytes), best index " +
                std::to_string(best[0]));
}

Outcome deployment_fidelity() {
    const fs::path dir = testing::scratch_dir("accept-deploy");
    int checked = 0;
    for (const bool classification : {true, false}) {
        const std::string train_csv = classification ? testing::blobs_csv() : testing::linear_csv();
        const std::string target = classification ? "label" : "y";
        const Dataset train = testing::dataset_from(train_csv);
        AutomlParams params;
        params.target = target;
        const auto in_process = std::make_shared<const TrainedModel>(run_automl(train, params, {}).model);

        // 100 fresh rows drawn with a different seed, target column removed
        const Dataset fresh_full = testing::dataset_from(classification ? testing::blobs_csv(100, 7)
                                                                        : testing::linear_csv(100, 0.1, 7));
        std::vector<Column> inputs;
        for (const auto& c : fresh_full.columns())
            if (c.name != target) inputs.push_back(c);
        const Dataset fresh(std::move(inputs));
        const auto want = in_process->predict(fresh);

        const fs::path artifact = dir / (target + ".zmodel");
        save_artifact(*in_process, artifact);
        const auto loaded = std::make_shared<const TrainedModel>(load_artifact(artifact));
        if (loaded->predict(fresh) != want) return fail(target + ": loaded artifact predicts differently");

        std::ostringstream csv;
        write_csv(csv, fresh);
        testing::write_text(dir / "fresh.csv", csv.str());
        const auto cli_pred = cli({"predict", artifact.string(), (dir / "fresh.csv").string()});
        std::ostringstream expected_csv;
        write_csv(expected_csv, in_process->predict_dataset(fresh));
        if (cli_pred.code != 0 || cli_pred.out != expected_csv.str())
            return fail(target + ": zeroml predict output differs");

        PredictionServer server(loaded);
        const int port = server.bind("127.0.0.1", 0);
        std::thread loop([&] { server.listen(); });
        json instances = json::array();
        for (std::size_t r = 0; r < fresh.n_rows(); ++r) {
            json row;
            for (const auto& c : fresh.columns()) row[c.name] = c.numbers[r];
            instances.push_back(row);
        }
        httplib::Client client("127.0.0.1", port);
        auto res = client.Post("/predict", json{{"instances", instances}}.dump(), "application/json");
        server.stop();
        loop.join();
        if (!res || res->status != 200) return fail(target + ": POST /predict failed");
        const json got = json::parse(res->body).at("predictions");
        if (got.size() != want.size()) return fail(target + ": wrong number of predictions");
        for (std::size_t i = 0; i < want.size(); ++i) {
            const bool same = classification ? got[i].get<std::string>() == in_process->label(want[i])
                                             : got[i].get<double>() == want[i];
            if (!same) return fail(target + ": served prediction " + std::to_string(i) + " differs");
        }
        checked += static_cast<int>(want.size());
    }
    return pass(std::to_string(checked) + " predictions identical across in-process, artifact, CLI and HTTP");
}

Outcome writability() {
    int lines = 0;
    std::istringstream in(kCanonical);
    for (std::string line; std::getline(in, line);)
        if (trim(line).size()) ++lines;
    if (lines > 6) return fail(std::to_string(lines) + " non-empty lines");
    const auto outcome = compile_source(kCanonical);
    if (!outcome.ok()) return fail(outcome.diagnostics.front().format("canonical"));

    // only documented constructs: statements and expressions of the core
    // grammar plus catalog builtins
    std::set<std::string> seen;
    for (const auto& s : outcome.program->ast.statements) note_productions(*s, seen);
    const std::set<std::string> documented = {"declaration", "if", "if-else", "for-in", "function-call",
                                              "expression-statement", "op+", "op-", "op*", "op/"};
    for (const auto& p : seen)
        if (!documented.count(p) && p.rfind("op", 0) != 0) return fail("uses " + p);
    const std::string reference = testing::read_text(kDocs / "language.md");
    if (reference.empty()) return fail("language reference missing");
    for (const auto& call : outcome.program->calls) {
        if (!call) continue;
        const std::string name = builtin(call->builtin).name;
        if (reference.find("`" + name + "(") == std::string::npos)
            return fail("builtin " + name + " is not in the language reference");
    }
    return pass(std::to_string(lines) + " non-empty lines, checks clean, every builtin documented");
}

Outcome parallel_speedup() {
    if (std::getenv("ZEROML_SKIP_SOFT")) return {Verdict::Skip, "ZEROML_SKIP_SOFT is set"};
    const unsigned cores = std::thread::hardware_concurrency();
    if (cores < 4) return {Verdict::Skip, "needs >= 4 cores, machine has " + std::to_string(cores)};

    const Dataset d = testing::dataset_from(testing::blobs_csv());
    std::vector<Candidate> roster;
    for (int i = 0; i < 16; ++i) {
        Candidate c = enumerate_candidates(TaskKind::Classification)[static_cast<std::size_t>(i % 7)];
        roster.push_back(c);
    }
    AutomlParams params;
    params.target = "label";
    params.folds = 2;
    auto wall = [&](int threads) {
        SearchOptions o;
        o.threads = threads;
        o.roster = roster;
        o.fit_padding = std::chrono::milliseconds(50);
        const auto t0 = std::chrono::steady_clock::now();
        run_automl(d, params, o);
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };
    const double one = wall(1), four = wall(4);
    const double ratio = four / one;
    const std::string detail = "1 thread " + fmt("%.2fs", one) + ", 4 threads " + fmt("%.2fs", four) +
                               ", ratio " + fmt("%.2f", ratio);
    return ratio <= 0.7 ? pass(detail) : fail(detail);
}

Outcome static_guarantees() {
    const auto rejected = corpus_files("reject_check");
    if (rejected.size() < 15) return fail(std::to_string(rejected.size()) + " rejection programs, need 15");
    std::map<std::string, int> by_kind;
    for (const auto& f : rejected) {
        const std::string src = testing::read_text(f);
        const auto want = expectation_of(src);
        if (!want || want->code.empty()) return fail(f.filename().string() + " lacks an expect line");
        const auto run = cli({"check", f.string()});
        if (run.code != kExitCompile) return fail(f.filename().string() + " exit " + std::to_string(run.code));
        const std::string head = f.filename().string() + ":" + std::to_string(want->line) + ":" +
                                 std::to_string(want->col) + ": " + want->code;
        if (run.err.find(head) == std::string::npos) return fail("expected '" + head + "', got " + run.err);
        const std::string name = f.filename().string();
        if (want->code == "E_REDECL") ++by_kind["redeclaration"];
        if (name.find("condition") != std::string::npos) ++by_kind["condition"];
        if (want->code == "E_TYPE" && run.err.find("requires numeric operands") != std::string::npos)
            ++by_kind["arithmetic"];
    }
    for (const char* kind : {"redeclaration", "condition", "arithmetic"})
        if (!by_kind[kind]) return fail(std::string("no ") + kind + " case in the rejection corpus");

    // every accepted program runs without a runtime type fault
    const fs::path dir = testing::scratch_dir("accept-soundness");
    fs::copy(kCorpus / "accept", dir, fs::copy_options::recursive);
    int ran = 0;
    for (const auto& f : corpus_files("accept")) {
        const auto outcome = compile_source(testing::read_text(f));
        if (!outcome.ok()) return fail(f.filename().string() + " does not check");
        std::ostringstream sink;
        RuntimeEnv env;
        env.workdir = dir;
        env.out = &sink;
        env.test_mode = true;
        try {
            execute(*outcome.bytecode, env);
        } catch (const RuntimeError& e) {
            if (e.kind() == RuntimeError::Kind::TypeFault)
                return fail(f.filename().string() + " raised a runtime type fault: " + e.what());
        }
        ++ran;
    }
    return pass(std::to_string(rejected.size()) + " programs rejected at check time, " + std::to_string(ran) +
                " accepted programs ran without type faults");
}

Outcome numeric_oracles() {
    Rng rng = make_rng(2718);
    double worst = 0;
    for (int i = 0; i < 50; ++i) worst = std::max(worst, oracle::logistic_gradient_error(rng));
    if (!(worst < 1e-5)) return fail("gradient relative error " + fmt("%.2e", worst));

    int splits = 0;
    for (int i = 0; i < 2000; ++i) {
        bool had = false;
        const std::string why = oracle::check_root_split(rng, &had);
        if (!why.empty()) return fail("CART root split: " + why);
        splits += had;
    }

    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 5 + uniform_below(rng, 30);
        Matrix x(n, 2), q(10, 2);
        for (auto& v : x.values) v = static_cast<double>(uniform_below(rng, 5));
        for (auto& v : q.values) v = static_cast<double>(uniform_below(rng, 5));
        std::vector<double> cls(n), val(n);
        for (std::size_t i = 0; i < n; ++i) {
            cls[i] = static_cast<double>(uniform_below(rng, 3));
            val[i] = standard_normal(rng);
        }
        for (int k : {1, 3, 7}) {
            Candidate c;
            c.kind = ModelKind::KnnClassifier;
            c.hyperparams = {{"k", k}};
            if (fit(c, x, cls, 3).predict(q) != oracle::knn_scan(x, cls, q, k, true))
                return fail("kNN classifier disagrees with the all-pairs scan");
            c.kind = ModelKind::KnnRegressor;
            const auto got = fit(c, x, val, 0).predict(q);
            const auto want = oracle::knn_scan(x, val, q, k, false);
            for (std::size_t i = 0; i < got.size(); ++i)
                if (std::abs(got[i] - want[i]) > 1e-12) return fail("kNN regressor disagrees with the scan");
        }
    }

    for (int draw = 0; draw < 1000; ++draw) {
        const std::size_t n = 2 + uniform_below(rng, 60);
        const std::size_t k = 2 + uniform_below(rng, std::min<std::size_t>(n, 10) - 1);
        std::vector<int> labels(n);
        for (auto& l : labels) l = static_cast<int>(uniform_below(rng, 4));
        const bool stratify = uniform_below(rng, 2) == 1;
        const std::string why =
            oracle::check_fold_plan(n, k, stratify ? &labels : nullptr, static_cast<std::int64_t>(draw));
        if (!why.empty()) return fail("fold draw " + std::to_string(draw) + ": " + why);
    }
    return pass("gradient rel. err " + fmt("%.1e", worst) + ", " + std::to_string(splits) +
                " optimal root splits, kNN exact, 1000 fold draws");
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double limit_seconds;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "grammar conformance", 5, grammar_conformance},
        {2, "end-to-end classification", 30, classification_end_to_end},
        {3, "end-to-end regression", 30, regression_end_to_end},
        {4, "determinism across thread counts", 60, determinism},
        {5, "deployment fidelity", 20, deployment_fidelity},
        {6, "writability", 5, writability},
        {7, "parallel search speedup (soft)", 120, parallel_speedup},
        {8, "static guarantees", 60, static_guarantees},
        {9, "numeric oracles", 60, numeric_oracles},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = fail(std::string("unexpected exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (o.verdict == Verdict::Pass && secs > c.limit_seconds)
            o = fail(o.detail + "; took " + fmt("%.1fs", secs) + ", limit " + fmt("%.0fs", c.limit_seconds));
        const char* tag = o.verdict == Verdict::Pass ? "PASS" : o.verdict == Verdict::Fail ? "FAIL" : "SKIP";
        std::printf("criterion %d %-34s %s  %s [%.2fs]\n", c.id, c.name, tag, o.detail.c_str(), secs);
        std::fflush(stdout);
        failures += o.verdict == Verdict::Fail;
    }
    return failures == 0 ? 0 : 1;
}
