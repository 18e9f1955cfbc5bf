/**
 * @file recognize.hpp
 * @brief Feature pattern definitions and the type-mining operation that
 *        classifies a feature as elementary or configuration and extracts
 *        its meaning tuple.
 *
 * An elementary feature only ever uses group decompositions (and/xor/or),
 * imply/exclude constraints, and included-in membership. A configuration
 * feature is recognized by the constructs exclusive to the configuration
 * pattern: a select clause, a default clause, or a reject constraint. The
 * configuration pattern's grammar subsumes the elementary one, so pattern
 * matching alone cannot discriminate; recognize() breaks the tie toward
 * elementary when no configuration-only construct is present.
 */
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "fmre/core.hpp"

namespace fmre {

enum class FeatureKind { Elementary, Configuration };
enum class FeaturePattern { Elementary, Configuration };

std::string_view kind_name(FeatureKind kind);  // "ELEMENTARY" / "CONFIGURATION"

/**
 * The semantics tuple of a feature: its name and its decomposition,
 * constraint, and included-in clauses, the former two rendered in canonical
 * clause syntax. `variation_echo` carries the values of a `variation`
 * attribute when one is present; it is informational and not part of the
 * tuple proper.
 */
struct Meaning {
    std::string name;
    std::vector<std::string> decomposition;
    std::vector<std::string> constraint;
    std::vector<std::string> included_in;
    std::vector<std::string> variation_echo;
};

/// "---" for an empty included-in list, otherwise "A, B".
std::string render_included_in(const Meaning& meaning);

/// Classifies by the feature's own relation clauses only.
FeatureKind recognize(const Feature& feature);

/// True iff every relation clause of the feature is producible by the named
/// pattern's grammar. The configuration pattern admits every clause kind.
bool match_pattern(const Feature& feature, FeaturePattern pattern);

struct MiningResult {
    FeatureKind kind = FeatureKind::Elementary;
    Meaning meaning;
};

/// Looks the feature up (tolerant lookup, see resolve_feature) and returns
/// its kind together with the populated Meaning. Throws UnknownFeatureError.
MiningResult feature_type_mining(const FeatureModel& model, std::string_view feature_name);

/**
 * Human-readable report block:
 *
 *   T = Configuration feature
 *   M = {Name: St-Queue
 *   Decomposition: Select List (Variation = static-list, Variation = static_queue)
 *   Constraint: Reject st-beh
 *   Included in: ---
 *   }
 */
std::string render_meaning_text(FeatureKind kind, const Meaning& meaning);

}  // namespace fmre
