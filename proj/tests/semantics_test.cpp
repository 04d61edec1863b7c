#include <gtest/gtest.h>

#include "zeroml/parser.hpp"
#include "zeroml/semantics.hpp"

namespace zeroml {
namespace {

CheckResult check_src(const std::string& src) { return check(parse_source(src)); }

SemCode first_code(const std::string& src) {
    const auto r = check_src(src);
    EXPECT_FALSE(r.ok()) << src;
    return r.errors.empty() ? SemCode::NoMut : r.errors.front().code;
}

TEST(Semantics, AcceptsCanonicalPipeline) {
    const auto r = check_src(
        "let d = load(\"blobs.csv\");\n"
        "let m = automl(input=d, target=\"label\");\n"
        "m.report();\n"
        "deploy(m, \"file\", \"m.zmodel\");\n");
    ASSERT_TRUE(r.ok()) << r.errors.front().message;
    EXPECT_EQ(r.program->symbols.size(), 2u);
    EXPECT_EQ(r.program->symbols[0].type, ZType::Dataset);
    EXPECT_EQ(r.program->symbols[1].type, ZType::Model);
}

TEST(Semantics, Redeclaration) {
    const auto r = check_src("let x = 1;\nlet x = 2;");
    ASSERT_EQ(r.errors.size(), 1u);
    EXPECT_EQ(r.errors[0].code, SemCode::Redecl);
    EXPECT_EQ(r.errors[0].line, 2);
    EXPECT_EQ(r.errors[0].col, 5);
}

TEST(Semantics, ShadowingInNestedScopeIsAllowed) {
    EXPECT_TRUE(check_src("let x = 1; if (true) { let x = 2.5; print(x); }").ok());
    EXPECT_TRUE(check_src("if (true) { let y = 1; } let y = \"s\";").ok());
}

TEST(Semantics, ScopeEndsWithBlock) {
    EXPECT_EQ(first_code("if (true) { let y = 1; } print(y);"), SemCode::Undef);
    EXPECT_EQ(first_code("for (i in range(0, 2)) { } print(i);"), SemCode::Undef);
}

TEST(Semantics, LoopVariableCannotBeRedeclaredInBody) {
    EXPECT_EQ(first_code("for (i in range(0, 2)) { let i = 3; }"), SemCode::Redecl);
}

TEST(Semantics, Undefined) {
    EXPECT_EQ(first_code("print(y);"), SemCode::Undef);
    EXPECT_EQ(first_code("let x = x;"), SemCode::Undef);
    EXPECT_EQ(first_code("frobnicate(1);"), SemCode::Undef);
}

TEST(Semantics, TypeErrorsNameBothTypes) {
    const auto r = check_src("let x = 1 + \"a\";");
    ASSERT_EQ(r.errors.size(), 1u);
    EXPECT_EQ(r.errors[0].code, SemCode::Type);
    EXPECT_NE(r.errors[0].message.find("Int"), std::string::npos) << r.errors[0].message;
    EXPECT_NE(r.errors[0].message.find("Text"), std::string::npos) << r.errors[0].message;
}

TEST(Semantics, ConditionMustBeBool) {
    EXPECT_EQ(first_code("if (1) { print(1); }"), SemCode::Type);
    EXPECT_TRUE(check_src("if (1 < 2) { print(1); }").ok());
}

TEST(Semantics, ForRequiresRange) {
    EXPECT_EQ(first_code("for (i in 3) { }"), SemCode::Type);
    EXPECT_EQ(first_code("let d = load(\"a.csv\"); for (r in d) { }"), SemCode::Type);
}

TEST(Semantics, ArithmeticTyping) {
    const auto r = check_src("let a = 1 + 2; let b = 10 / 4; let c = 1 * 2.0; let t = 1 == 1.0;");
    ASSERT_TRUE(r.ok());
    EXPECT_EQ(r.program->symbols[0].type, ZType::Int);
    EXPECT_EQ(r.program->symbols[1].type, ZType::Float);
    EXPECT_EQ(r.program->symbols[2].type, ZType::Float);
    EXPECT_EQ(r.program->symbols[3].type, ZType::Bool);
    EXPECT_EQ(first_code("let b = true + 1;"), SemCode::Type);
    EXPECT_EQ(first_code("let s = \"a\" + \"b\";"), SemCode::Type);
    EXPECT_EQ(first_code("let e = \"a\" == 1;"), SemCode::Type);
    EXPECT_EQ(first_code("let c = \"a\" < \"b\";"), SemCode::Type);
}

TEST(Semantics, BuiltinArguments) {
    EXPECT_EQ(first_code("let r = range(1);"), SemCode::Arg);
    EXPECT_EQ(first_code("let r = range(1, 2, 3);"), SemCode::Arg);
    EXPECT_EQ(first_code("let d = load(\"a\"); let m = automl(input=d);"), SemCode::Arg);
    EXPECT_EQ(first_code("let d = load(\"a\"); let m = automl(input=d, target=\"y\", speed=1);"), SemCode::Arg);
    EXPECT_EQ(first_code("let d = load(\"a\"); let m = automl(d, \"y\", input=d);"), SemCode::Arg);
    EXPECT_EQ(first_code("let d = load(1);"), SemCode::Type);
    EXPECT_EQ(first_code("let d = load(\"a\"); let m = automl(input=d, target=\"y\", folds=2.5);"), SemCode::Type);
    EXPECT_EQ(first_code("let d = load(\"a\"); d.report();"), SemCode::Type);
    EXPECT_EQ(first_code("let d = load(\"a\"); let m = automl(input=d, target=\"y\"); m.explain();"), SemCode::Undef);
}

TEST(Semantics, IntPromotesToFloatParameter) {
    EXPECT_TRUE(check_src("let d = load(\"a\"); let m = automl(input=d, target=\"y\", max_time=5);").ok());
}

TEST(Semantics, UnitCannotBeBound) {
    EXPECT_EQ(first_code("let u = print(1); print(u + 1);"), SemCode::Type);
}

TEST(Semantics, CollectsAllErrorsInSourceOrder) {
    const auto r = check_src("let a = b;\nlet c = 1 + true;\nif (3) { }\nlet a = 1;");
    ASSERT_GE(r.errors.size(), 4u);
    for (std::size_t i = 1; i < r.errors.size(); ++i) {
        EXPECT_LE(std::make_pair(r.errors[i - 1].line, r.errors[i - 1].col),
                  std::make_pair(r.errors[i].line, r.errors[i].col));
    }
    EXPECT_FALSE(r.program.has_value());
}

TEST(Semantics, CodeNames) {
    EXPECT_EQ(sem_code_name(SemCode::Redecl), "E_REDECL");
    EXPECT_EQ(sem_code_name(SemCode::Undef), "E_UNDEF");
    EXPECT_EQ(sem_code_name(SemCode::Type), "E_TYPE");
    EXPECT_EQ(sem_code_name(SemCode::Arg), "E_ARG");
    EXPECT_EQ(sem_code_name(SemCode::NoMut), "E_NOMUT");
}

}  // namespace
}  // namespace zeroml
