#include <gtest/gtest.h>

#include <sstream>

#include "support.hpp"
#include "zeroml/artifact.hpp"
#include "zeroml/cli.hpp"
#include "zeroml/vm.hpp"

namespace zeroml {
namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = testing::scratch_dir("cli");
        testing::write_text(dir_ / "blobs.csv", testing::blobs_csv(60));
    }
    std::string file(const std::string& name, const std::string& text) {
        testing::write_text(dir_ / name, text);
        return (dir_ / name).string();
    }
    std::filesystem::path dir_;
};

TEST_F(Cli, UsageErrors) {
    EXPECT_EQ(cli({}).code, kExitUsage);
    EXPECT_EQ(cli({"frobnicate"}).code, kExitUsage);
    EXPECT_EQ(cli({"run"}).code, kExitUsage);
    EXPECT_EQ(cli({"run", "x.zml", "--threads", "zero"}).code, kExitUsage);
    EXPECT_EQ(cli({"check", (dir_ / "missing.zml").string()}).code, kExitUsage);
}

TEST_F(Cli, HelpExitsZero) {
    const auto r = cli({"--help"});
    EXPECT_EQ(r.code, kExitOk);
    EXPECT_NE(r.out.find("run"), std::string::npos);
    EXPECT_EQ(cli({"run", "--help"}).code, kExitOk);
}

TEST_F(Cli, CheckAcceptsAndRejects) {
    EXPECT_EQ(cli({"check", file("ok.zml", "let x = 1;\nprint(x);\n")}).code, kExitOk);
    const auto bad = cli({"check", file("bad.zml", "let x = 1;\nlet x = 2;\n")});
    EXPECT_EQ(bad.code, kExitCompile);
    EXPECT_NE(bad.err.find("bad.zml:2:5: E_REDECL"), std::string::npos) << bad.err;
    EXPECT_EQ(cli({"check", file("lex.zml", "let @ = 1;")}).code, kExitCompile);
    EXPECT_EQ(cli({"run", file("parse.zml", "let x = ;")}).code, kExitCompile);
}

TEST_F(Cli, StaticErrorsPreventExecution) {
    // the print on line 1 must not run when line 2 fails to check
    const auto r = cli({"run", file("late.zml", "print(\"side effect\");\nlet y = 1 + \"a\";\n")});
    EXPECT_EQ(r.code, kExitCompile);
    EXPECT_EQ(r.out, "");
}

TEST_F(Cli, RuntimeErrorExitCode) {
    const auto r = cli({"run", file("div.zml", "let a = 0;\nprint(1 / a);\n")});
    EXPECT_EQ(r.code, kExitRuntime);
    EXPECT_NE(r.err.find("div.zml:2: runtime error"), std::string::npos) << r.err;
    EXPECT_EQ(cli({"run", file("nofile.zml", "let d = load(\"nope.csv\");"), "--workdir", dir_.string()}).code,
              kExitRuntime);
}

TEST_F(Cli, TokensAndAst) {
    const std::string f = file("t.zml", "let x = 1 + 2;\n");
    const auto t = cli({"tokens", f});
    EXPECT_EQ(t.code, kExitOk);
    EXPECT_EQ(t.out.substr(0, t.out.find('\n')), "LET let 1:1");
    EXPECT_NE(t.out.find("EOF"), std::string::npos);
    const auto a = cli({"ast", f});
    EXPECT_EQ(a.code, kExitOk);
    EXPECT_EQ(a.out, cli({"ast", f}).out);
    EXPECT_EQ(cli({"tokens", file("badtok.zml", "1.2.3")}).code, kExitCompile);
}

TEST_F(Cli, RunDeployPredict) {
    setenv(kTestEpochEnv, "0", 1);
    const std::string prog = file("p.zml",
                                  "let d = load(\"blobs.csv\");\n"
                                  "let m = automl(input=d, target=\"label\", folds=3);\n"
                                  "m.report();\n"
                                  "deploy(m, \"file\", \"m.zmodel\");\n");
    const auto run = cli({"run", prog, "--workdir", dir_.string(), "--test-mode", "--threads", "2", "--report-out",
                          (dir_ / "report.json").string()});
    ASSERT_EQ(run.code, kExitOk) << run.err;
    EXPECT_NE(run.out.find("ZeroML report"), std::string::npos);
    ASSERT_TRUE(std::filesystem::exists(dir_ / "m.zmodel"));
    EXPECT_NE(testing::read_text(dir_ / "m.zmodel").find("1970-01-01T00:00:00Z"), std::string::npos);
    const auto report = nlohmann::json::parse(testing::read_text(dir_ / "report.json"));
    EXPECT_EQ(report.at("rows").size(), 7u);

    testing::write_text(dir_ / "q.csv", "x1,x2,x3,x4\n0,0,0,0\n3,3,3,3\n");
    const auto pred = cli({"predict", (dir_ / "m.zmodel").string(), (dir_ / "q.csv").string()});
    ASSERT_EQ(pred.code, kExitOk) << pred.err;
    EXPECT_EQ(pred.out, "prediction\n0\n1\n");
    const auto to_file = cli({"predict", (dir_ / "m.zmodel").string(), (dir_ / "q.csv").string(), "--out",
                              (dir_ / "pred.csv").string()});
    EXPECT_EQ(to_file.code, kExitOk);
    EXPECT_EQ(testing::read_text(dir_ / "pred.csv"), "prediction\n0\n1\n");

    testing::write_text(dir_ / "short.csv", "x1,x2\n0,0\n");
    EXPECT_EQ(cli({"predict", (dir_ / "m.zmodel").string(), (dir_ / "short.csv").string()}).code, kExitRuntime);
    testing::write_text(dir_ / "junk.zmodel", "{not json");
    EXPECT_EQ(cli({"predict", (dir_ / "junk.zmodel").string(), (dir_ / "q.csv").string()}).code, kExitRuntime);
    unsetenv(kTestEpochEnv);
}

TEST_F(Cli, SeedFlagReachesReport) {
    const std::string prog = file("s.zml",
                                  "let m = automl(input=load(\"blobs.csv\"), target=\"label\", folds=2);\n"
                                  "report(m);\n");
    const auto r = cli({"run", prog, "--workdir", dir_.string(), "--test-mode", "--seed", "5"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_NE(r.out.find("seed=5"), std::string::npos);
}

}  // namespace
}  // namespace zeroml
