#include "zeroml/lexer.hpp"

#include <array>
#include <utility>

namespace zeroml {

namespace {

bool is_ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool is_ident_char(char c) { return is_ident_start(c) || is_digit(c); }

constexpr std::array<std::pair<std::string_view, TokenKind>, 7> kKeywords{{
    {"let", TokenKind::Let},
    {"if", TokenKind::If},
    {"else", TokenKind::Else},
    {"for", TokenKind::For},
    {"in", TokenKind::In},
    {"true", TokenKind::BoolLit},
    {"false", TokenKind::BoolLit},
}};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_trivia();
            if (pos_ >= src_.size()) {
                out.push_back(Token{TokenKind::Eof, "", line_, col_, pos_});
                return out;
            }
            out.push_back(next());
        }
    }

private:
    char peek(std::size_t ahead = 0) const {
        return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
    }

    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_trivia() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else if (c == '/' && peek(1) == '/') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else {
                return;
            }
        }
    }

    Token make(TokenKind kind, std::size_t start, int line, int col) const {
        return Token{kind, std::string(src_.substr(start, pos_ - start)), line, col, start};
    }

    Token next() {
        const std::size_t start = pos_;
        const int line = line_;
        const int col = col_;
        const char c = src_[pos_];

        if (is_ident_start(c)) {
            while (pos_ < src_.size() && is_ident_char(src_[pos_])) advance();
            std::string_view word = src_.substr(start, pos_ - start);
            for (const auto& [kw, kind] : kKeywords) {
                if (kw == word) return make(kind, start, line, col);
            }
            return make(TokenKind::Ident, start, line, col);
        }
        if (is_digit(c)) return number(start, line, col);
        if (c == '"') return string(start, line, col);

        auto single = [&](TokenKind kind) {
            advance();
            return make(kind, start, line, col);
        };
        auto maybe_double = [&](TokenKind one, TokenKind two) {
            advance();
            if (peek() == '=') advance();
            else return make(one, start, line, col);
            return make(two, start, line, col);
        };

        switch (c) {
            case '+': return single(TokenKind::Plus);
            case '-': return single(TokenKind::Minus);
            case '*': return single(TokenKind::Star);
            case '/': return single(TokenKind::Slash);
            case '(': return single(TokenKind::LParen);
            case ')': return single(TokenKind::RParen);
            case '{': return single(TokenKind::LBrace);
            case '}': return single(TokenKind::RBrace);
            case ',': return single(TokenKind::Comma);
            case ';': return single(TokenKind::Semi);
            case '.': return single(TokenKind::Dot);
            case '=': return maybe_double(TokenKind::Eq, TokenKind::EqEq);
            case '<': return maybe_double(TokenKind::Lt, TokenKind::Le);
            case '>': return maybe_double(TokenKind::Gt, TokenKind::Ge);
            case '!':
                if (peek(1) == '=') {
                    advance();
                    advance();
                    return make(TokenKind::Neq, start, line, col);
                }
                break;
            default:
                break;
        }
        const auto byte = static_cast<unsigned char>(c);
        if (byte >= 0x80) throw LexError(line, col, "non-ASCII character outside string literal");
        throw LexError(line, col, std::string("unexpected character '") + c + "'");
    }

    Token number(std::size_t start, int line, int col) {
        TokenKind kind = TokenKind::IntLit;
        while (is_digit(peek())) advance();
        if (peek() == '.') {
            if (!is_digit(peek(1))) {
                throw LexError(line, col, "malformed number: expected digit after '.'");
            }
            advance();
            while (is_digit(peek())) advance();
            kind = TokenKind::FloatLit;
        }
        // Maximal munch: anything glued to a number makes the whole run malformed.
        if (peek() == '.' || is_ident_char(peek())) {
            throw LexError(line, col, "malformed number '" +
                                          std::string(src_.substr(start, pos_ - start + 1)) + "'");
        }
        return make(kind, start, line, col);
    }

    Token string(std::size_t start, int line, int col) {
        advance();  // opening quote
        for (;;) {
            if (pos_ >= src_.size()) throw LexError(line, col, "unterminated string literal");
            char c = src_[pos_];
            if (c == '"') {
                advance();
                return make(TokenKind::StringLit, start, line, col);
            }
            if (c == '\\') {
                char esc = peek(1);
                if (esc != '"' && esc != '\\') {
                    if (pos_ + 1 >= src_.size()) {
                        throw LexError(line, col, "unterminated string literal");
                    }
                    throw LexError(line_, col_, "invalid escape sequence in string literal");
                }
                advance();
            }
            advance();
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

}  // namespace

std::string_view token_kind_name(TokenKind kind) {
    switch (kind) {
        case TokenKind::Let: return "LET";
        case TokenKind::If: return "IF";
        case TokenKind::Else: return "ELSE";
        case TokenKind::For: return "FOR";
        case TokenKind::In: return "IN";
        case TokenKind::Ident: return "IDENT";
        case TokenKind::IntLit: return "INT_LIT";
        case TokenKind::FloatLit: return "FLOAT_LIT";
        case TokenKind::StringLit: return "STRING_LIT";
        case TokenKind::BoolLit: return "BOOL_LIT";
        case TokenKind::Plus: return "PLUS";
        case TokenKind::Minus: return "MINUS";
        case TokenKind::Star: return "STAR";
        case TokenKind::Slash: return "SLASH";
        case TokenKind::Eq: return "EQ";
        case TokenKind::EqEq: return "EQEQ";
        case TokenKind::Neq: return "NEQ";
        case TokenKind::Lt: return "LT";
        case TokenKind::Gt: return "GT";
        case TokenKind::Le: return "LE";
        case TokenKind::Ge: return "GE";
        case TokenKind::LParen: return "LPAREN";
        case TokenKind::RParen: return "RPAREN";
        case TokenKind::LBrace: return "LBRACE";
        case TokenKind::RBrace: return "RBRACE";
        case TokenKind::Comma: return "COMMA";
        case TokenKind::Semi: return "SEMI";
        case TokenKind::Dot: return "DOT";
        case TokenKind::Eof: return "EOF";
    }
    return "?";
}

std::vector<Token> tokenize(std::string_view source) { return Lexer(source).run(); }

std::string unescape_string_literal(std::string_view lexeme) {
    std::string out;
    if (lexeme.size() < 2) return out;
    std::string_view body = lexeme.substr(1, lexeme.size() - 2);
    for (std::size_t i = 0; i < body.size(); ++i) {
        if (body[i] == '\\' && i + 1 < body.size()) ++i;
        out.push_back(body[i]);
    }
    return out;
}

std::string escape_string_literal(std::string_view value) {
    std::string out = "\"";
    for (char c : value) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

}  // namespace zeroml
