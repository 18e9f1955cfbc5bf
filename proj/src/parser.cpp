#include "fmre/parser.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <sstream>
#include <utility>

namespace fmre {

namespace {

struct KeywordEntry {
    std::string_view word;
    TokenKind kind;
};

constexpr std::array<KeywordEntry, 19> kKeywords{{
    {"feature", TokenKind::KwFeature},
    {"model", TokenKind::KwModel},
    {"end", TokenKind::KwEnd},
    {"fm", TokenKind::KwFm},
    {"attributes", TokenKind::KwAttributes},
    {"relations", TokenKind::KwRelations},
    {"decomposition", TokenKind::KwDecomposition},
    {"constraints", TokenKind::KwConstraints},
    {"included", TokenKind::KwIncluded},
    {"in", TokenKind::KwIn},
    {"and", TokenKind::KwAnd},
    {"xor", TokenKind::KwXor},
    {"or", TokenKind::KwOr},
    {"select", TokenKind::KwSelect},
    {"default", TokenKind::KwDefault},
    {"variation", TokenKind::KwVariation},
    {"imply", TokenKind::KwImply},
    {"exclude", TokenKind::KwExclude},
    {"reject", TokenKind::KwReject},
}};

bool is_ident_start(unsigned char c) { return std::isalpha(c) != 0; }
bool is_ident_char(unsigned char c) {
    return std::isalnum(c) != 0 || c == '-' || c == '_';
}

std::string to_lower(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    return out;
}

std::string describe_token(const Token& t) {
    switch (t.kind) {
        case TokenKind::Identifier: return "identifier '" + t.text + "'";
        case TokenKind::String: return "string";
        case TokenKind::Semicolon: return "';'";
        case TokenKind::Comma: return "','";
        case TokenKind::Colon: return "':'";
        case TokenKind::LParen: return "'('";
        case TokenKind::RParen: return "')'";
        case TokenKind::Equals: return "'='";
        case TokenKind::EndOfInput: return "end of input";
        default: return "'" + t.text + "'";
    }
}

std::string printable_char(unsigned char c) {
    if (c >= 0x20 && c < 0x7f) return std::string("'") + static_cast<char>(c) + "'";
    std::ostringstream out;
    out << "byte 0x" << std::hex << static_cast<int>(c);
    return out.str();
}

// String literals are the only tokens whose bytes survive into the model,
// so malformed UTF-8 must be rejected here (overlong forms, surrogates,
// and out-of-range code points included).
bool valid_utf8(std::string_view s) {
    std::size_t i = 0;
    const std::size_t n = s.size();
    while (i < n) {
        const unsigned char b0 = static_cast<unsigned char>(s[i]);
        if (b0 < 0x80) {
            ++i;
            continue;
        }
        std::size_t len;
        unsigned cp;
        if ((b0 & 0xE0) == 0xC0) {
            len = 2;
            cp = b0 & 0x1Fu;
        } else if ((b0 & 0xF0) == 0xE0) {
            len = 3;
            cp = b0 & 0x0Fu;
        } else if ((b0 & 0xF8) == 0xF0) {
            len = 4;
            cp = b0 & 0x07u;
        } else {
            return false;
        }
        if (i + len > n) return false;
        for (std::size_t k = 1; k < len; ++k) {
            const unsigned char bk = static_cast<unsigned char>(s[i + k]);
            if ((bk & 0xC0) != 0x80) return false;
            cp = (cp << 6) | (bk & 0x3Fu);
        }
        if (len == 2 && cp < 0x80) return false;
        if (len == 3 && cp < 0x800) return false;
        if (len == 4 && cp < 0x10000) return false;
        if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return false;
        i += len;
    }
    return true;
}

}  // namespace

TokenizeResult tokenize(std::string_view text) {
    TokenizeResult result;
    std::size_t i = 0;
    int line = 1;
    int col = 1;

    // A UTF-8 byte order mark is tolerated at the start.
    if (text.size() >= 3 && static_cast<unsigned char>(text[0]) == 0xEF &&
        static_cast<unsigned char>(text[1]) == 0xBB && static_cast<unsigned char>(text[2]) == 0xBF) {
        i = 3;
    }

    auto fail = [&](SourceSpan span, std::string expected, std::string found, std::string message) {
        result.error = ParseError{span, {std::move(expected)}, std::move(found), std::move(message)};
    };

    while (i < text.size()) {
        const unsigned char c = static_cast<unsigned char>(text[i]);
        if (c == '\n') {
            ++line;
            col = 1;
            ++i;
            continue;
        }
        if (c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
            ++col;
            ++i;
            continue;
        }
        if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
            while (i < text.size() && text[i] != '\n') ++i;
            continue;  // newline handled on the next iteration
        }

        const SourceSpan start{line, col, 1};
        switch (c) {
            case ';': result.tokens.push_back({TokenKind::Semicolon, ";", start}); ++i; ++col; continue;
            case ',': result.tokens.push_back({TokenKind::Comma, ",", start}); ++i; ++col; continue;
            case ':': result.tokens.push_back({TokenKind::Colon, ":", start}); ++i; ++col; continue;
            case '(': result.tokens.push_back({TokenKind::LParen, "(", start}); ++i; ++col; continue;
            case ')': result.tokens.push_back({TokenKind::RParen, ")", start}); ++i; ++col; continue;
            case '=': result.tokens.push_back({TokenKind::Equals, "=", start}); ++i; ++col; continue;
            default: break;
        }

        if (c == '"') {
            std::string value;
            std::size_t j = i + 1;
            int len = 1;
            bool closed = false;
            while (j < text.size()) {
                const char d = text[j];
                if (d == '"') {
                    closed = true;
                    ++j;
                    ++len;
                    break;
                }
                if (d == '\n') break;
                if (d == '\\' && j + 1 < text.size() &&
                    (text[j + 1] == '"' || text[j + 1] == '\\')) {
                    value.push_back(text[j + 1]);
                    j += 2;
                    len += 2;
                    continue;
                }
                value.push_back(d);
                ++j;
                ++len;
            }
            if (!closed) {
                fail({line, col, len}, "closing '\"'", "end of line",
                     "unterminated string literal");
                return result;
            }
            if (!valid_utf8(value)) {
                fail({line, col, len}, "valid UTF-8 string", "malformed byte sequence",
                     "string literal is not valid UTF-8");
                return result;
            }
            SourceSpan span = start;
            span.length = len;
            result.tokens.push_back({TokenKind::String, std::move(value), span});
            i = j;
            col += len;
            continue;
        }

        if (is_ident_start(c)) {
            std::size_t j = i;
            while (j < text.size() && is_ident_char(static_cast<unsigned char>(text[j]))) ++j;
            std::string lexeme(text.substr(i, j - i));
            SourceSpan span = start;
            span.length = static_cast<int>(j - i);
            TokenKind kind = TokenKind::Identifier;
            const std::string lowered = to_lower(lexeme);
            for (const auto& kw : kKeywords) {
                if (kw.word == lowered) {
                    kind = kw.kind;
                    break;
                }
            }
            result.tokens.push_back({kind, std::move(lexeme), span});
            col += span.length;
            i = j;
            continue;
        }

        if (std::isdigit(c) != 0) {
            fail(start, "identifier", printable_char(c),
                 "identifier cannot start with a digit");
            return result;
        }
        fail(start, "token", printable_char(c),
             "unexpected character " + printable_char(c));
        return result;
    }
    return result;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

// Thrown internally to unwind to the nearest recovery point; recovery skips
// to the next ';' and resumes.
struct SyncPoint {};

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {
        if (tokens_.empty() || tokens_.back().kind != TokenKind::EndOfInput) {
            SourceSpan eof{1, 1, 0};
            if (!tokens_.empty()) {
                eof = tokens_.back().span;
                eof.column += eof.length;
                eof.length = 0;
            }
            tokens_.push_back({TokenKind::EndOfInput, "", eof});
        }
    }

    ParseResult run() {
        ParseResult result;
        FeatureModel model;
        try {
            expect(TokenKind::KwFeature, "'feature'");
            expect(TokenKind::KwModel, "'model'");
            model.name = expect(TokenKind::Identifier, "model name").text;
            expect(TokenKind::Semicolon, "';'");
        } catch (const SyncPoint&) {
            synchronize();
        }

        while (true) {
            if (at(TokenKind::KwFeature)) {
                try {
                    model.features.push_back(parse_feature());
                } catch (const SyncPoint&) {
                    synchronize();
                }
            } else if (at(TokenKind::KwEnd) || at(TokenKind::EndOfInput)) {
                break;
            } else {
                report({"'feature'", "'end'"});
                synchronize();
                if (at(TokenKind::EndOfInput)) break;
            }
        }

        try {
            expect(TokenKind::KwEnd, "'end'");
            expect(TokenKind::KwFm, "'fm'");
            const Token closing = expect(TokenKind::Identifier, "model name");
            expect(TokenKind::Semicolon, "';'");
            if (closing.text != model.name) {
                errors_.push_back({closing.span,
                                   {"model name '" + model.name + "'"},
                                   "'" + closing.text + "'",
                                   "end name " + closing.text + " does not match " + model.name});
            }
            if (!at(TokenKind::EndOfInput)) {
                report({"end of input"});
            }
        } catch (const SyncPoint&) {
        }

        result.errors = std::move(errors_);
        result.feature_spans = std::move(feature_spans_);
        if (result.errors.empty()) result.model = std::move(model);
        return result;
    }

private:
    const Token& current() const { return tokens_[pos_]; }
    const Token& peek(std::size_t n) const {
        return tokens_[std::min(pos_ + n, tokens_.size() - 1)];
    }
    bool at(TokenKind kind) const { return current().kind == kind; }
    void advance() {
        if (pos_ + 1 < tokens_.size()) ++pos_;
    }

    bool name_like(const Token& t) const {
        return t.kind == TokenKind::Identifier ||
               (t.kind >= TokenKind::KwFeature && t.kind <= TokenKind::KwReject);
    }

    [[noreturn]] void fail(std::vector<std::string> expected) {
        report(std::move(expected));
        throw SyncPoint{};
    }

    void report(std::vector<std::string> expected) {
        const Token& t = current();
        std::string found = describe_token(t);
        std::string msg = "expected ";
        for (std::size_t i = 0; i < expected.size(); ++i) {
            if (i > 0) msg += i + 1 == expected.size() ? " or " : ", ";
            msg += expected[i];
        }
        msg += ", found " + found;
        errors_.push_back({t.span, std::move(expected), std::move(found), std::move(msg)});
    }

    Token expect(TokenKind kind, std::string what) {
        if (!at(kind)) fail({std::move(what)});
        Token t = current();
        advance();
        return t;
    }

    // Skips to just past the next ';' (or stops at a safe boundary keyword).
    void synchronize() {
        if (at(TokenKind::EndOfInput)) return;
        advance();  // always make progress past the offending token
        while (!at(TokenKind::EndOfInput)) {
            if (at(TokenKind::Semicolon)) {
                advance();
                return;
            }
            if (at(TokenKind::KwFeature) || at(TokenKind::KwEnd) ||
                at(TokenKind::KwDecomposition) || at(TokenKind::KwConstraints) ||
                at(TokenKind::KwIncluded)) {
                return;
            }
            advance();
        }
    }

    Feature parse_feature() {
        Feature f;
        expect(TokenKind::KwFeature, "'feature'");
        const Token name = expect(TokenKind::Identifier, "feature name");
        f.name = name.text;
        feature_spans_.emplace_back(f.name, name.span);
        expect(TokenKind::Semicolon, "';'");

        if (at(TokenKind::KwAttributes)) parse_attributes(f);

        if (at(TokenKind::KwRelations)) {
            advance();
            if (!at(TokenKind::KwDecomposition) && !at(TokenKind::KwConstraints) &&
                !at(TokenKind::KwIncluded)) {
                fail({"'decomposition'", "'constraints'", "'included'"});
            }
            while (true) {
                if (at(TokenKind::KwDecomposition)) {
                    parse_decomposition(f);
                } else if (at(TokenKind::KwConstraints)) {
                    parse_constraint(f);
                } else if (at(TokenKind::KwIncluded)) {
                    parse_included_in(f);
                } else {
                    break;
                }
            }
        }

        expect(TokenKind::KwEnd, "'end'");
        expect(TokenKind::KwFeature, "'feature'");
        expect(TokenKind::Semicolon, "';'");
        return f;
    }

    // Attribute keys and values admit keyword spellings ("variation" is a
    // perfectly good key). Value lists end at the comma that introduces the
    // next `key :` pair, which takes two tokens of lookahead.
    void parse_attributes(Feature& f) {
        expect(TokenKind::KwAttributes, "'attributes'");
        while (true) {
            Attribute attr;
            if (!name_like(current())) fail({"attribute key"});
            attr.key = current().text;
            advance();
            expect(TokenKind::Colon, "':'");
            attr.values.push_back(parse_value());
            while (at(TokenKind::Comma) &&
                   !(name_like(peek(1)) && peek(2).kind == TokenKind::Colon)) {
                advance();
                attr.values.push_back(parse_value());
            }
            f.attributes.push_back(std::move(attr));
            if (at(TokenKind::Comma)) {
                advance();
                continue;
            }
            expect(TokenKind::Semicolon, "';'");
            break;
        }
    }

    std::string parse_value() {
        if (at(TokenKind::String) || name_like(current())) {
            std::string v = current().text;
            advance();
            return v;
        }
        fail({"attribute value"});
    }

    void parse_decomposition(Feature& f) {
        expect(TokenKind::KwDecomposition, "'decomposition'");
        if (at(TokenKind::KwAnd) || at(TokenKind::KwXor) || at(TokenKind::KwOr)) {
            const TokenKind op = current().kind;
            advance();
            expect(TokenKind::LParen, "'('");
            std::vector<std::string> children;
            children.push_back(expect(TokenKind::Identifier, "feature name").text);
            while (at(TokenKind::Comma)) {
                advance();
                children.push_back(expect(TokenKind::Identifier, "feature name").text);
            }
            expect(TokenKind::RParen, "')'");
            const DecompositionKind kind = op == TokenKind::KwAnd   ? DecompositionKind::And
                                           : op == TokenKind::KwXor ? DecompositionKind::Xor
                                                                    : DecompositionKind::Or;
            f.decompositions.push_back(Decomposition::group(kind, std::move(children)));
        } else if (at(TokenKind::KwSelect)) {
            advance();
            std::string base = expect(TokenKind::Identifier, "feature name").text;
            std::vector<std::string> variations;
            if (at(TokenKind::LParen)) {
                advance();
                while (true) {
                    expect(TokenKind::KwVariation, "'variation'");
                    expect(TokenKind::Equals, "'='");
                    variations.push_back(expect(TokenKind::Identifier, "feature name").text);
                    if (at(TokenKind::Comma)) {
                        advance();
                        continue;
                    }
                    break;
                }
                expect(TokenKind::RParen, "')'");
            }
            f.decompositions.push_back(Decomposition::select(std::move(base), std::move(variations)));
        } else if (at(TokenKind::KwDefault)) {
            advance();
            f.decompositions.push_back(
                Decomposition::fallback(expect(TokenKind::Identifier, "feature name").text));
        } else {
            fail({"'and'", "'xor'", "'or'", "'select'", "'default'"});
        }
        expect(TokenKind::Semicolon, "';'");
    }

    void parse_constraint(Feature& f) {
        expect(TokenKind::KwConstraints, "'constraints'");
        ConstraintKind kind;
        if (at(TokenKind::KwImply)) {
            kind = ConstraintKind::Imply;
        } else if (at(TokenKind::KwExclude)) {
            kind = ConstraintKind::Exclude;
        } else if (at(TokenKind::KwReject)) {
            kind = ConstraintKind::Reject;
        } else {
            fail({"'imply'", "'exclude'", "'reject'"});
        }
        advance();
        expect(TokenKind::LParen, "'('");
        std::string target = expect(TokenKind::Identifier, "feature name").text;
        expect(TokenKind::RParen, "')'");
        expect(TokenKind::Semicolon, "';'");
        f.constraints.push_back({kind, std::move(target)});
    }

    void parse_included_in(Feature& f) {
        expect(TokenKind::KwIncluded, "'included'");
        expect(TokenKind::KwIn, "'in'");
        f.included_in.push_back(expect(TokenKind::Identifier, "feature name").text);
        while (at(TokenKind::Comma)) {
            advance();
            f.included_in.push_back(expect(TokenKind::Identifier, "feature name").text);
        }
        expect(TokenKind::Semicolon, "';'");
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    std::vector<ParseError> errors_;
    std::vector<std::pair<std::string, SourceSpan>> feature_spans_;
};

}  // namespace

ParseResult parse(std::string_view text) {
    TokenizeResult lexed = tokenize(text);
    if (!lexed.ok()) {
        ParseResult result;
        result.errors.push_back(*lexed.error);
        return result;
    }
    Parser parser(std::move(lexed.tokens));
    return parser.run();
}

// ---------------------------------------------------------------------------
// Canonical printer
// ---------------------------------------------------------------------------

namespace {

bool bare_value_ok(std::string_view value) {
    if (value.empty()) return false;
    if (!is_ident_start(static_cast<unsigned char>(value.front()))) return false;
    return std::all_of(value.begin(), value.end(),
                       [](char c) { return is_ident_char(static_cast<unsigned char>(c)); });
}

void print_value(std::ostream& out, std::string_view value) {
    if (bare_value_ok(value)) {
        out << value;
        return;
    }
    out << '"';
    for (char c : value) {
        if (c == '"' || c == '\\') out << '\\';
        out << c;
    }
    out << '"';
}

void print_joined(std::ostream& out, const std::vector<std::string>& items) {
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i > 0) out << ", ";
        out << items[i];
    }
}

}  // namespace

std::string render_decomposition(const Decomposition& d) {
    std::ostringstream out;
    switch (d.kind) {
        case DecompositionKind::And:
        case DecompositionKind::Xor:
        case DecompositionKind::Or:
            out << (d.kind == DecompositionKind::And   ? "and"
                    : d.kind == DecompositionKind::Xor ? "xor"
                                                       : "or")
                << '(';
            print_joined(out, d.children);
            out << ')';
            break;
        case DecompositionKind::Select:
            out << "select " << d.base;
            if (!d.variations.empty()) {
                out << " (";
                for (std::size_t i = 0; i < d.variations.size(); ++i) {
                    if (i > 0) out << ", ";
                    out << "variation = " << d.variations[i];
                }
                out << ')';
            }
            break;
        case DecompositionKind::Default:
            out << "default " << d.target;
            break;
    }
    return out.str();
}

std::string render_constraint(const Constraint& c) {
    std::ostringstream out;
    switch (c.kind) {
        case ConstraintKind::Imply: out << "imply"; break;
        case ConstraintKind::Exclude: out << "exclude"; break;
        case ConstraintKind::Reject: out << "reject"; break;
    }
    out << '(' << c.target << ')';
    return out.str();
}

std::string print_canonical(const FeatureModel& model) {
    std::ostringstream out;
    out << "feature model " << model.name << ";\n";
    for (const auto& f : model.features) {
        out << "  feature " << f.name << ";\n";
        if (!f.attributes.empty()) {
            out << "    attributes ";
            for (std::size_t i = 0; i < f.attributes.size(); ++i) {
                if (i > 0) out << ", ";
                out << f.attributes[i].key << ": ";
                for (std::size_t j = 0; j < f.attributes[i].values.size(); ++j) {
                    if (j > 0) out << ", ";
                    print_value(out, f.attributes[i].values[j]);
                }
            }
            out << ";\n";
        }
        if (!f.decompositions.empty() || !f.constraints.empty() || !f.included_in.empty()) {
            out << "    relations\n";
            for (const auto& d : f.decompositions) {
                out << "      decomposition " << render_decomposition(d) << ";\n";
            }
            for (const auto& c : f.constraints) {
                out << "      constraints " << render_constraint(c) << ";\n";
            }
            if (!f.included_in.empty()) {
                out << "      included in ";
                print_joined(out, f.included_in);
                out << ";\n";
            }
        }
        out << "  end feature;\n";
    }
    out << "end fm " << model.name << ";\n";
    return out.str();
}

}  // namespace fmre
