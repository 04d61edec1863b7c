#include <gtest/gtest.h>

#include "zeroml/lexer.hpp"
#include "zeroml/rng.hpp"

namespace zeroml {
namespace {

std::vector<TokenKind> kinds(std::string_view src) {
    std::vector<TokenKind> out;
    for (const auto& t : tokenize(src)) out.push_back(t.kind);
    return out;
}

TEST(Lexer, LetStatement) {
    const auto toks = tokenize("let x = 5;");
    ASSERT_EQ(toks.size(), 6u);
    EXPECT_EQ(kinds("let x = 5;"), (std::vector<TokenKind>{TokenKind::Let, TokenKind::Ident, TokenKind::Eq,
                                                           TokenKind::IntLit, TokenKind::Semi, TokenKind::Eof}));
    EXPECT_EQ(toks[1].lexeme, "x");
    EXPECT_EQ(toks[3].lexeme, "5");
}

TEST(Lexer, EmptyInputIsJustEof) {
    const auto toks = tokenize("");
    ASSERT_EQ(toks.size(), 1u);
    EXPECT_EQ(toks[0].kind, TokenKind::Eof);
    EXPECT_EQ(toks[0].line, 1);
    EXPECT_EQ(toks[0].col, 1);
}

TEST(Lexer, NamedArgumentCall) {
    EXPECT_EQ(kinds("automl(input=d)"),
              (std::vector<TokenKind>{TokenKind::Ident, TokenKind::LParen, TokenKind::Ident, TokenKind::Eq,
                                      TokenKind::Ident, TokenKind::RParen, TokenKind::Eof}));
}

TEST(Lexer, RejectsStrayCharacterWithPosition) {
    try {
        tokenize("let @ = 1;");
        FAIL() << "expected LexError";
    } catch (const LexError& e) {
        EXPECT_EQ(e.line(), 1);
        EXPECT_EQ(e.col(), 5);
    }
}

TEST(Lexer, ErrorPositionOnLaterLine) {
    try {
        tokenize("let a = 1;\n  let b = #;");
        FAIL();
    } catch (const LexError& e) {
        EXPECT_EQ(e.line(), 2);
        EXPECT_EQ(e.col(), 11);
    }
}

TEST(Lexer, MaximalMunch) {
    EXPECT_EQ(kinds("a<=b"), (std::vector<TokenKind>{TokenKind::Ident, TokenKind::Le, TokenKind::Ident, TokenKind::Eof}));
    EXPECT_EQ(kinds("a==b!=c>=d"),
              (std::vector<TokenKind>{TokenKind::Ident, TokenKind::EqEq, TokenKind::Ident, TokenKind::Neq,
                                      TokenKind::Ident, TokenKind::Ge, TokenKind::Ident, TokenKind::Eof}));
    EXPECT_EQ(kinds("a< =b"), (std::vector<TokenKind>{TokenKind::Ident, TokenKind::Lt, TokenKind::Eq, TokenKind::Ident,
                                                      TokenKind::Eof}));
    EXPECT_EQ(kinds("letter"), (std::vector<TokenKind>{TokenKind::Ident, TokenKind::Eof}));
}

TEST(Lexer, MalformedNumbers) {
    EXPECT_THROW(tokenize("1.2.3"), LexError);
    EXPECT_THROW(tokenize("123abc"), LexError);
    EXPECT_THROW(tokenize("1."), LexError);
    EXPECT_THROW(tokenize("x = 5.report()"), LexError);
}

TEST(Lexer, Literals) {
    const auto toks = tokenize(R"(2.5 "a \"q\" \\" true false 007)");
    ASSERT_EQ(toks.size(), 6u);
    EXPECT_EQ(toks[0].kind, TokenKind::FloatLit);
    EXPECT_EQ(toks[1].kind, TokenKind::StringLit);
    EXPECT_EQ(unescape_string_literal(toks[1].lexeme), R"(a "q" \)");
    EXPECT_EQ(toks[2].kind, TokenKind::BoolLit);
    EXPECT_EQ(toks[3].kind, TokenKind::BoolLit);
    EXPECT_EQ(toks[4].kind, TokenKind::IntLit);
}

TEST(Lexer, StringErrors) {
    EXPECT_THROW(tokenize("\"open"), LexError);
    EXPECT_THROW(tokenize(R"("bad \n escape")"), LexError);
    EXPECT_THROW(tokenize("\"ends with \\"), LexError);
}

TEST(Lexer, NonAsciiOutsideStringsRejected) {
    EXPECT_THROW(tokenize("let \xc3\xa9 = 1;"), LexError);
    EXPECT_NO_THROW(tokenize("print(\"caf\xc3\xa9\");"));
}

TEST(Lexer, CommentsRunToEndOfLine) {
    const auto toks = tokenize("// header\nlet x = 1; // trailing @ ignored\nx");
    ASSERT_EQ(toks.size(), 7u);
    EXPECT_EQ(toks[0].line, 2);
    EXPECT_EQ(toks[5].line, 3);
    EXPECT_EQ(toks[5].lexeme, "x");
}

TEST(Lexer, SlashIsDivisionNotComment) {
    EXPECT_EQ(kinds("a / b"), (std::vector<TokenKind>{TokenKind::Ident, TokenKind::Slash, TokenKind::Ident, TokenKind::Eof}));
}

// Between consecutive tokens there is only whitespace or comments, and the
// token lexemes sit at their recorded offsets: the source is recoverable.
void expect_lossless(const std::string& src) {
    const auto toks = tokenize(src);
    ASSERT_EQ(toks.back().kind, TokenKind::Eof);
    std::size_t cursor = 0;
    std::size_t prev_offset = 0;
    for (std::size_t i = 0; i < toks.size(); ++i) {
        const auto& t = toks[i];
        if (i > 0 && t.kind != TokenKind::Eof) {
            EXPECT_GT(t.offset, prev_offset);
        }
        prev_offset = t.offset;
        ASSERT_GE(t.offset, cursor);
        const std::string gap = src.substr(cursor, t.offset - cursor);
        std::size_t g = 0;
        while (g < gap.size()) {
            if (gap.compare(g, 2, "//") == 0) {
                while (g < gap.size() && gap[g] != '\n') ++g;
            } else {
                ASSERT_NE(std::string(" \t\r\n").find(gap[g]), std::string::npos) << "gap: " << gap;
                ++g;
            }
        }
        EXPECT_EQ(src.compare(t.offset, t.lexeme.size(), t.lexeme), 0);
        // line/col agree with the offset
        int line = 1, col = 1;
        for (std::size_t k = 0; k < t.offset; ++k) {
            if (src[k] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        EXPECT_EQ(t.line, line);
        EXPECT_EQ(t.col, col);
        cursor = t.offset + t.lexeme.size();
    }
    EXPECT_EQ(cursor, src.size());
    EXPECT_EQ(std::count_if(toks.begin(), toks.end(), [](const Token& t) { return t.kind == TokenKind::Eof; }), 1);
}

TEST(Lexer, LosslessPositionsOnFixedProgram) {
    expect_lossless("let d = load(\"blobs.csv\");\n// comment\nlet m = automl(input=d, target=\"label\");\n"
                    "m.report();\nfor (i in range(0, 3)) { print(i * 2.5); }\n");
}

TEST(Lexer, LosslessPositionsOnRandomTokenSoup) {
    const std::vector<std::string> pieces = {"let", "x", "12", "3.25", "\"s\"", "+", "-", "*", "/", "==",
                                             "!=", "<", "<=", ">", ">=", "(", ")", "{", "}", ",", ";", ".",
                                             "true", "for", "in", "// c\n", " ", "\n", "\t"};
    Rng rng = make_rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        std::string src;
        const auto n = uniform_below(rng, 40);
        for (std::uint64_t i = 0; i < n; ++i) {
            src += pieces[uniform_below(rng, pieces.size())];
            src += ' ';
        }
        expect_lossless(src);
        EXPECT_EQ(kinds(src), kinds(src));  // deterministic
    }
}

}  // namespace
}  // namespace zeroml
