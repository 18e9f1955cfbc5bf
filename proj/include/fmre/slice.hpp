/**
 * @file slice.hpp
 * @brief Forward/backward graph-based slicing of feature models.
 *
 * A slice query names a feature, a direction, a relation (AND or OR), and,
 * for OR, an optional list of alternative features. The result is a list of
 * sub feature models:
 *
 *  - forward AND produces one slice per immediate decomposition target of
 *    the feature (and-children, select base and variations, default target),
 *    each slice being the breadth-first closure of that target over
 *    and/select/variation/default edges with imply targets pulled in
 *    transitively;
 *  - forward OR produces a single merged slice covering the feature, every
 *    alternative, and their closures, plus any or/xor group parent that the
 *    feature shares with an alternative (with the group restricted to
 *    in-slice members);
 *  - backward produces a single slice of the feature plus all its ancestors,
 *    whatever the relation argument says (it is echoed, not interpreted).
 *
 * Xor children are deliberately not part of forward-AND closures: they are
 * not compulsory, so selecting the parent does not commit to them. They are
 * reached by the OR machinery and by backward slicing.
 *
 * When a slice contains a configuration carrying reject(X), X is filtered
 * from that slice after closure (the queried feature and explicitly named
 * alternatives are never filtered, so every slice can be reported).
 *
 * Every slice is itself a valid model: relations are restricted to in-slice
 * members rather than left dangling. oracle_slice() recomputes the same
 * semantics by naive fixed-point iteration over the raw relation clauses,
 * with no shared traversal code, and exists to cross-check slice().
 */
#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fmre/core.hpp"
#include "fmre/recognize.hpp"

namespace fmre {

enum class SliceDirection { Forward, Backward };
enum class SliceRelation { And, Or };

std::string_view direction_name(SliceDirection direction);  // "FORWARD" / "BACKWARD"
std::string_view relation_name(SliceRelation relation);     // "AND" / "OR"

struct SliceQuery {
    std::string feature;
    SliceDirection direction = SliceDirection::Forward;
    SliceRelation relation = SliceRelation::And;
    std::vector<std::string> alternatives;  // OR only

    bool operator==(const SliceQuery&) const = default;
};

/// Slices plus the query echo and the queried feature's recognition result,
/// mirroring the mining step the slicing procedure performs first.
struct SliceResult {
    SliceQuery query;
    FeatureKind kind = FeatureKind::Elementary;
    Meaning meaning;
    std::vector<FeatureModel> slices;
};

class SliceQueryError : public std::runtime_error {
public:
    enum class Kind {
        UnknownFeature,
        UnknownAlternative,
        AlternativesWithAnd,
        AlternativeEqualsFeature,
    };

    SliceQueryError(Kind kind, std::string name);
    Kind kind() const { return kind_; }
    const std::string& name() const { return name_; }

private:
    Kind kind_;
    std::string name_;
};

/// Dispatches on (direction, relation) as described above. Feature and
/// alternative names go through the tolerant lookup. The model is expected
/// to be free of validation errors.
SliceResult slice(const FeatureModel& model, const SliceQuery& query);

/// Forward AND: one slice per immediate decomposition target, single
/// closure slice when there is none. Exact names required.
std::vector<FeatureModel> select_and(const FeatureModel& model, std::string_view feature_name);

/// Forward OR: one merged slice. An empty alternative list yields the union
/// of the select_and slices.
std::vector<FeatureModel> select_or(const FeatureModel& model, std::string_view feature_name,
                                    const std::vector<std::string>& alternatives);

/// Backward: one slice of the feature plus ancestors(), edges among included
/// features retained.
std::vector<FeatureModel> parent_slice(const FeatureModel& model, std::string_view feature_name);

/// Independent verification oracle: same contract as slice(), computed by
/// repeated full passes over the relation clauses until nothing changes.
/// Quadratic and proud of it.
SliceResult oracle_slice(const FeatureModel& model, const SliceQuery& query);

/// Sub-model over `keep`: features in declaration order, clauses restricted
/// to in-slice members, clauses that lose their anchor dropped entirely.
FeatureModel restrict_model(const FeatureModel& model, const std::set<std::string>& keep);

}  // namespace fmre
