#include "zeroml/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "zeroml/artifact.hpp"
#include "zeroml/driver.hpp"
#include "zeroml/errors.hpp"
#include "zeroml/lexer.hpp"
#include "zeroml/parser.hpp"
#include "zeroml/server.hpp"
#include "zeroml/vm.hpp"

namespace zeroml {

namespace {

struct CliConfig {
    std::string file;
    std::string artifact;
    std::string csv;
    std::string out_path;
    std::string workdir = ".";
    std::string report_out;
    std::string host = "0.0.0.0";
    int threads = 1;
    std::int64_t seed = 42;
    int port = 8080;
    bool test_mode = false;
};

int default_threads() {
    const unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : static_cast<int>(n);
}

bool read_file(const std::string& path, std::string& text, std::ostream& err) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        err << "zeroml: cannot read '" << path << "'\n";
        return false;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
    return true;
}

int report_diagnostics(const CompileOutcome& c, const std::string& file, std::ostream& err) {
    for (const auto& d : c.diagnostics) err << d.format(file) << '\n';
    return kExitCompile;
}

int cmd_tokens(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
    std::string src;
    if (!read_file(cfg.file, src, err)) return kExitUsage;
    try {
        for (const auto& t : tokenize(src)) {
            out << token_kind_name(t.kind) << ' ' << t.lexeme << ' ' << t.line << ':' << t.col << '\n';
        }
    } catch (const LexError& e) {
        err << Diagnostic{"E_LEX", e.line(), e.col(), e.what()}.format(cfg.file) << '\n';
        return kExitCompile;
    }
    return kExitOk;
}

int cmd_ast(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
    std::string src;
    if (!read_file(cfg.file, src, err)) return kExitUsage;
    try {
        out << dump_tree(parse_source(src));
    } catch (const LexError& e) {
        err << Diagnostic{"E_LEX", e.line(), e.col(), e.what()}.format(cfg.file) << '\n';
        return kExitCompile;
    } catch (const ParseError& e) {
        err << Diagnostic{"E_PARSE", e.line(), e.col(), e.what()}.format(cfg.file) << '\n';
        return kExitCompile;
    }
    return kExitOk;
}

int cmd_check(const CliConfig& cfg, std::ostream&, std::ostream& err) {
    std::string src;
    if (!read_file(cfg.file, src, err)) return kExitUsage;
    const CompileOutcome c = compile_source(src);
    if (!c.ok()) return report_diagnostics(c, cfg.file, err);
    return kExitOk;
}

int cmd_run(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
    std::string src;
    if (!read_file(cfg.file, src, err)) return kExitUsage;
    const CompileOutcome c = compile_source(src);
    if (!c.ok()) return report_diagnostics(c, cfg.file, err);
    RuntimeEnv env;
    env.seed = cfg.seed;
    env.threads = cfg.threads;
    env.workdir = cfg.workdir;
    env.out = &out;
    env.test_mode = cfg.test_mode;
    if (!cfg.report_out.empty()) env.report_out = cfg.report_out;
    try {
        return execute(*c.bytecode, env);
    } catch (const RuntimeError& e) {
        out.flush();
        err << cfg.file << ":" << e.line() << ": runtime error: " << e.what() << '\n';
        return kExitRuntime;
    }
}

int cmd_serve(const CliConfig& cfg, std::ostream&, std::ostream& err) {
    try {
        serve(cfg.artifact, cfg.host, cfg.port);
    } catch (const Error& e) {
        err << "zeroml serve: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitOk;
}

int cmd_predict(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        const TrainedModel model = load_artifact(cfg.artifact);
        const Dataset data = load_csv(cfg.csv);
        const Dataset predictions = model.predict_dataset(data);
        if (cfg.out_path.empty()) {
            write_csv(out, predictions);
        } else {
            std::ofstream file(cfg.out_path, std::ios::binary | std::ios::trunc);
            if (!file) throw IoError("cannot write '" + cfg.out_path + "'");
            write_csv(file, predictions);
        }
    } catch (const Error& e) {
        err << "zeroml predict: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CliConfig cfg;
    cfg.threads = default_threads();

    CLI::App app{"ZeroML: a small statically typed language for AutoML pipelines", "zeroml"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Compile and execute a program");
    run->add_option("file", cfg.file, "Source file (.zml)")->required();
    run->add_option("--threads", cfg.threads, "Worker threads for model search (default: all cores)")
        ->check(CLI::PositiveNumber);
    run->add_option("--seed", cfg.seed, "Seed used by automl unless the program passes seed=");
    run->add_option("--workdir", cfg.workdir, "Directory that relative data and artifact paths resolve against");
    run->add_option("--report-out", cfg.report_out, "Write each search report as JSON to this path");
    run->add_flag("--test-mode", cfg.test_mode, "Zero wall-clock fields for byte-stable output");

    auto* chk = app.add_subcommand("check", "Type-check a program without running it");
    chk->add_option("file", cfg.file, "Source file (.zml)")->required();

    auto* toks = app.add_subcommand("tokens", "Print the token stream, one token per line");
    toks->add_option("file", cfg.file, "Source file (.zml)")->required();

    auto* ast = app.add_subcommand("ast", "Print the syntax tree");
    ast->add_option("file", cfg.file, "Source file (.zml)")->required();

    auto* srv = app.add_subcommand("serve", "Serve a model artifact over HTTP");
    srv->add_option("artifact", cfg.artifact, "Model artifact (.zmodel)")->required();
    srv->add_option("--port", cfg.port, "TCP port")->check(CLI::Range(0, 65535));
    srv->add_option("--host", cfg.host, "Bind address");

    auto* pred = app.add_subcommand("predict", "Predict every row of a CSV file with a model artifact");
    pred->add_option("artifact", cfg.artifact, "Model artifact (.zmodel)")->required();
    pred->add_option("csv", cfg.csv, "Input CSV with the model's feature columns")->required();
    pred->add_option("--out", cfg.out_path, "Write predictions here instead of stdout");

    std::vector<std::string> storage{"zeroml"};
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : storage) argv.push_back(s.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        err << app.help();
        return kExitUsage;
    }

    if (run->parsed()) return cmd_run(cfg, out, err);
    if (chk->parsed()) return cmd_check(cfg, out, err);
    if (toks->parsed()) return cmd_tokens(cfg, out, err);
    if (ast->parsed()) return cmd_ast(cfg, out, err);
    if (srv->parsed()) return cmd_serve(cfg, out, err);
    if (pred->parsed()) return cmd_predict(cfg, out, err);
    err << app.help();
    return kExitUsage;
}

}  // namespace zeroml
