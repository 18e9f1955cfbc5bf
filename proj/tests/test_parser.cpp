#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "fmre/parser.hpp"
#include "support/model_gen.hpp"

using namespace fmre;

namespace {

std::string read_corpus() {
    std::ifstream in(FMRE_CORPUS, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

FeatureModel parse_ok(std::string_view text) {
    ParseResult r = parse(text);
    for (const auto& e : r.errors) {
        CAPTURE(e.message);
        CAPTURE(e.span.line);
        CAPTURE(e.span.column);
    }
    REQUIRE(r.ok());
    return *r.model;
}

}  // namespace

TEST_CASE("tokenize feature declaration") {
    TokenizeResult r = tokenize("feature St-Queue;");
    REQUIRE(r.ok());
    REQUIRE(r.tokens.size() == 3);
    CHECK(r.tokens[0].kind == TokenKind::KwFeature);
    CHECK(r.tokens[1].kind == TokenKind::Identifier);
    CHECK(r.tokens[1].text == "St-Queue");
    CHECK(r.tokens[2].kind == TokenKind::Semicolon);
}

TEST_CASE("tokenize empty input") {
    TokenizeResult r = tokenize("");
    CHECK(r.ok());
    CHECK(r.tokens.empty());
}

TEST_CASE("identifier cannot start with a digit") {
    TokenizeResult r = tokenize("feature 9x;");
    REQUIRE_FALSE(r.ok());
    CHECK(r.error->span.line == 1);
    CHECK(r.error->span.column == 9);
    CHECK(r.error->message.find("digit") != std::string::npos);
}

TEST_CASE("keywords are case-insensitive, identifiers keep their case") {
    FeatureModel m = parse_ok("Feature Model M;\nFEATURE Leaf;\nEND FEATURE;\nEnd FM M;");
    CHECK(m.name == "M");
    REQUIRE(m.features.size() == 1);
    CHECK(m.features[0].name == "Leaf");
}

TEST_CASE("comments and CRLF line endings are accepted") {
    FeatureModel m =
        parse_ok("// header comment\r\nfeature model M;\r\nfeature a; // trailing\r\nend feature;\r\nend fm M;\r\n");
    CHECK(m.features.size() == 1);
}

TEST_CASE("smallest model") {
    FeatureModel m = parse_ok("feature model M; end fm M;");
    CHECK(m.name == "M");
    CHECK(m.features.empty());
}

TEST_CASE("mismatched end name") {
    ParseResult r = parse("feature model M; end fm N;");
    REQUIRE_FALSE(r.ok());
    REQUIRE(r.errors.size() == 1);
    CHECK(r.errors[0].message == "end name N does not match M");
}

TEST_CASE("parser recovers at semicolons and reports several errors") {
    ParseResult r = parse(
        "feature model M;\n"
        "feature a;\n"
        "  relations\n"
        "    decomposition and(;\n"
        "    constraints imply(b);\n"
        "end feature;\n"
        "feature b;\n"
        "  relations\n"
        "    decomposition nonsense;\n"
        "end feature;\n"
        "end fm M;\n");
    REQUIRE_FALSE(r.ok());
    CHECK(r.errors.size() >= 2);
    for (const auto& e : r.errors) {
        CHECK(e.span.line >= 1);
        CHECK(e.span.column >= 1);
        CHECK_FALSE(e.expected.empty());
    }
}

TEST_CASE("corpus parses with the documented structure") {
    FeatureModel m = parse_ok(read_corpus());
    CHECK(m.name == "List");
    CHECK(m.features.size() == 10);

    const Feature* sq = m.find("static_queue");
    REQUIRE(sq != nullptr);
    REQUIRE(sq->constraints.size() == 1);
    CHECK(sq->constraints[0].kind == ConstraintKind::Exclude);
    CHECK(sq->constraints[0].target == "static-stack");
    REQUIRE(sq->included_in.size() == 1);
    CHECK(sq->included_in[0] == "St-Queue");

    const Feature* stq = m.find("St-Queue");
    REQUIRE(stq != nullptr);
    REQUIRE(stq->decompositions.size() == 1);
    CHECK(stq->decompositions[0].kind == DecompositionKind::Select);
    CHECK(stq->decompositions[0].base == "List");
    CHECK(stq->decompositions[0].variations ==
          std::vector<std::string>{"static-list", "static_queue"});
}

TEST_CASE("canonical print of the empty model") {
    FeatureModel m;
    m.name = "M";
    CHECK(print_canonical(m) == "feature model M;\nend fm M;\n");
}

TEST_CASE("corpus round trips through the canonical printer") {
    FeatureModel m = parse_ok(read_corpus());
    FeatureModel again = parse_ok(print_canonical(m));
    CHECK(again == m);
}

TEST_CASE("attribute values survive quoting") {
    FeatureModel m = parse_ok(
        "feature model M;\n"
        "feature a;\n"
        "  attributes note: \"two words\", plain, kind: \"default\";\n"
        "end feature;\n"
        "end fm M;\n");
    const Feature* a = m.find("a");
    REQUIRE(a != nullptr);
    REQUIRE(a->attributes.size() == 2);
    CHECK(a->attributes[0].key == "note");
    CHECK(a->attributes[0].values == std::vector<std::string>{"two words", "plain"});
    CHECK(a->attributes[1].key == "kind");
    CHECK(a->attributes[1].values == std::vector<std::string>{"default"});

    FeatureModel again = parse_ok(print_canonical(m));
    CHECK(again == m);
}

TEST_CASE("attribute keys may use keyword spellings") {
    FeatureModel m = parse_ok(
        "feature model M;\n"
        "feature a;\n"
        "  attributes variation: x, y;\n"
        "end feature;\n"
        "end fm M;\n");
    REQUIRE(m.features[0].attributes.size() == 1);
    CHECK(m.features[0].attributes[0].key == "variation");
    CHECK(m.features[0].attributes[0].values == std::vector<std::string>{"x", "y"});
}

TEST_CASE("select without variations and single-child groups stay printable") {
    FeatureModel m = parse_ok(
        "feature model M;\n"
        "feature cfg;\n"
        "  relations\n"
        "    decomposition select base;\n"
        "    decomposition and(only);\n"
        "end feature;\n"
        "feature base; end feature;\n"
        "feature only; end feature;\n"
        "end fm M;\n");
    const Feature* cfg = m.find("cfg");
    REQUIRE(cfg != nullptr);
    CHECK(cfg->decompositions[0].variations.empty());
    CHECK(cfg->decompositions[1].children == std::vector<std::string>{"only"});
    FeatureModel again = parse_ok(print_canonical(m));
    CHECK(again == m);
}

TEST_CASE("round trip and idempotence on generated models") {
    std::mt19937 rng(20250810);
    for (int i = 0; i < 200; ++i) {
        const FeatureModel m = fmre::testing::random_model(rng);
        const std::string once = print_canonical(m);
        FeatureModel back = parse_ok(once);
        CHECK(back == m);
        CHECK(print_canonical(back) == once);
    }
}

TEST_CASE("parse never throws on hostile bytes") {
    std::mt19937 rng(42);
    for (int i = 0; i < 2000; ++i) {
        const std::string junk = fmre::testing::random_bytes(rng);
        ParseResult r = parse(junk);  // must not crash
        if (!r.ok()) {
            for (const auto& e : r.errors) {
                CHECK(e.span.line >= 1);
                CHECK(e.span.column >= 1);
            }
        }
    }
}

TEST_CASE("unterminated string is a parse error") {
    ParseResult r = parse("feature model M;\nfeature a;\nattributes k: \"oops\nend feature;\nend fm M;\n");
    CHECK_FALSE(r.ok());
}

TEST_CASE("string values must be valid UTF-8") {
    std::string text = "feature model M;\nfeature a;\nattributes k: \"bad\x98\";\nend feature;\nend fm M;\n";
    ParseResult r = parse(text);
    REQUIRE_FALSE(r.ok());
    CHECK(r.errors[0].message.find("UTF-8") != std::string::npos);

    // well-formed multibyte sequences are fine
    FeatureModel m = parse_ok(
        "feature model M;\nfeature a;\nattributes k: \"caf\xc3\xa9\";\nend feature;\nend fm M;\n");
    CHECK(m.features[0].attributes[0].values[0] == "caf\xc3\xa9");
}
