/**
 * @file parser.hpp
 * @brief Lexer, recursive-descent parser, and canonical pretty-printer for
 *        the `.fm` feature-model language.
 *
 * Grammar (keywords case-insensitive, identifiers case-sensitive):
 *
 *   model   := "feature" "model" IDENT ";" feature* "end" "fm" IDENT ";"
 *   feature := "feature" IDENT ";"
 *              ["attributes" attr ("," attr)* ";"]
 *              ["relations" clause+]
 *              "end" "feature" ";"
 *   attr    := KEY ":" value ("," value)*
 *   clause  := decomp ";" | constr ";" | incl ";"
 *   decomp  := "decomposition"
 *              ( ("and"|"xor"|"or") "(" IDENT ("," IDENT)* ")"
 *              | "select" IDENT ["(" "variation" "=" IDENT
 *                                ("," "variation" "=" IDENT)* ")"]
 *              | "default" IDENT )
 *   constr  := "constraints" ("imply"|"exclude"|"reject") "(" IDENT ")"
 *   incl    := "included" "in" IDENT ("," IDENT)*
 *
 * Attribute keys and values additionally admit keyword spellings (a feature
 * may carry a `variation:` attribute), and values may be double-quoted
 * strings when they contain whitespace. Group and variation lists accept a
 * single element so that slice sub-models, whose relations are restricted to
 * in-slice members, stay printable and re-parseable. `//` starts a line
 * comment. Input is UTF-8; LF and CRLF are both accepted, LF is emitted.
 */
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fmre/core.hpp"

namespace fmre {

struct SourceSpan {
    int line = 1;    // 1-based
    int column = 1;  // 1-based, in bytes
    int length = 0;

    bool operator==(const SourceSpan&) const = default;
};

enum class TokenKind {
    KwFeature,
    KwModel,
    KwEnd,
    KwFm,
    KwAttributes,
    KwRelations,
    KwDecomposition,
    KwConstraints,
    KwIncluded,
    KwIn,
    KwAnd,
    KwXor,
    KwOr,
    KwSelect,
    KwDefault,
    KwVariation,
    KwImply,
    KwExclude,
    KwReject,
    Identifier,
    String,
    Semicolon,
    Comma,
    Colon,
    LParen,
    RParen,
    Equals,
    EndOfInput,
};

struct Token {
    TokenKind kind = TokenKind::EndOfInput;
    std::string text;  // identifier/keyword lexeme or string contents
    SourceSpan span;
};

struct ParseError {
    SourceSpan span;
    std::vector<std::string> expected;  // token descriptions, nonempty
    std::string found;
    std::string message;  // rendered human-readable form
};

struct TokenizeResult {
    std::vector<Token> tokens;
    std::optional<ParseError> error;

    bool ok() const { return !error.has_value(); }
};

/// Splits input into tokens. Stops at the first lexical problem (stray
/// character, identifier starting with a digit, unterminated string) and
/// reports it; never throws, on any byte sequence.
TokenizeResult tokenize(std::string_view text);

struct ParseResult {
    std::optional<FeatureModel> model;  // set iff errors is empty
    std::vector<ParseError> errors;
    /// Declaration span per feature, in declaration order, for diagnostics.
    std::vector<std::pair<std::string, SourceSpan>> feature_spans;

    bool ok() const { return errors.empty(); }
};

/// Parses a whole model. Recovers at `;` boundaries so several errors can be
/// reported from one run; references are not resolved here (validate() does
/// that). Never throws on arbitrary input.
ParseResult parse(std::string_view text);

/// Canonical clause bodies, e.g. "and(str, st-beh, st-methods)",
/// "select List (variation = static-list, variation = static_queue)",
/// "default dyn-beh", "reject(st-beh)".
std::string render_decomposition(const Decomposition& decomposition);
std::string render_constraint(const Constraint& constraint);

/**
 * Deterministic canonical form: 2-space indentation steps, features in
 * declaration order, clauses ordered decompositions / constraints / included
 * in, attributes first. parse(print_canonical(m)) is structurally equal to m
 * and printing is idempotent.
 */
std::string print_canonical(const FeatureModel& model);

}  // namespace fmre
