/**
 * @file core.hpp
 * @brief Domain types for variable-requirements feature models: features,
 *        relations, the derived typed dependency graph, and structural
 *        validation shared by the parser, recognizer, slicer, and exporters.
 *
 * A FeatureModel is a named, ordered collection of features. Each feature
 * carries attributes, decomposition clauses (and/xor/or groups, select with
 * variation bindings, default), cross-tree constraints (imply/exclude/reject)
 * and included-in membership declarations. build_graph() materializes every
 * relation occurrence as a typed directed edge; validate() reports all
 * well-formedness problems as diagnostics instead of throwing.
 *
 * Models and graphs are immutable after construction and safe to share
 * between threads for concurrent reads.
 */
#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fmre {

// ---------------------------------------------------------------------------
// Model types
// ---------------------------------------------------------------------------

enum class DecompositionKind { And, Xor, Or, Select, Default };
enum class ConstraintKind { Imply, Exclude, Reject };

/// Named characteristic of a feature; values are plain strings.
struct Attribute {
    std::string key;
    std::vector<std::string> values;

    bool operator==(const Attribute&) const = default;
};

/// One decomposition clause. Group kinds (And/Xor/Or) use `children`,
/// Select uses `base` + `variations`, Default uses `target`.
struct Decomposition {
    DecompositionKind kind = DecompositionKind::And;
    std::vector<std::string> children;
    std::string base;
    std::vector<std::string> variations;
    std::string target;

    bool operator==(const Decomposition&) const = default;

    static Decomposition group(DecompositionKind kind, std::vector<std::string> children);
    static Decomposition select(std::string base, std::vector<std::string> variations);
    static Decomposition fallback(std::string target);  // "default" is reserved
};

/// Cross-tree constraint naming another feature.
struct Constraint {
    ConstraintKind kind = ConstraintKind::Imply;
    std::string target;

    bool operator==(const Constraint&) const = default;
};

struct Feature {
    std::string name;
    std::vector<Attribute> attributes;
    std::vector<Decomposition> decompositions;
    std::vector<Constraint> constraints;
    std::vector<std::string> included_in;  // container configuration names

    bool operator==(const Feature&) const = default;

    /// First group decomposition (And/Xor/Or), or nullptr.
    const Decomposition* group_decomposition() const;
};

/// Ordered collection of features; declaration order is significant and
/// preserved through parsing, printing, and serialization.
struct FeatureModel {
    std::string name;
    std::vector<Feature> features;

    bool operator==(const FeatureModel&) const = default;

    /// Exact-name lookup; first declaration wins. Returns nullptr if absent.
    const Feature* find(std::string_view feature_name) const;
    bool contains(std::string_view feature_name) const { return find(feature_name) != nullptr; }
};

/// Thrown by query operations handed a name that does not resolve.
class UnknownFeatureError : public std::runtime_error {
public:
    explicit UnknownFeatureError(std::string feature_name);
    const std::string& name() const { return name_; }

private:
    std::string name_;
};

/// Lookup used by query surfaces (recognition, slicing, CLI). Tries the
/// exact name first; on a miss, falls back to the unique feature whose name
/// matches after case folding and treating '-' and '_' as equivalent. The
/// published examples spell the same feature several ways ("Static-list",
/// "static-list", "static-queue", "static_queue"), so mis-cased queries
/// resolve as long as they are unambiguous. Returns nullptr when nothing
/// (or more than one thing) matches.
const Feature* resolve_feature(const FeatureModel& model, std::string_view query);

// ---------------------------------------------------------------------------
// Derived graph
// ---------------------------------------------------------------------------

enum class EdgeLabel {
    DecompAnd,
    DecompXor,
    DecompOr,
    Select,      // configuration -> base feature
    Variation,   // configuration -> variation target
    Default,     // configuration -> default target
    Imply,
    Exclude,     // stored mirrored: both directions present
    Reject,
    IncludedIn,  // member -> container
};

std::string_view edge_label_name(EdgeLabel label);

struct GraphEdge {
    std::string source;
    EdgeLabel label = EdgeLabel::DecompAnd;
    std::string dest;

    bool operator==(const GraphEdge&) const = default;
};

/**
 * Typed directed multigraph over feature names. Nodes appear in declaration
 * order; names referenced but never declared become phantom nodes appended
 * after the declared ones (validate() reports them as UNRESOLVED).
 */
class FeatureGraph {
public:
    const std::vector<std::string>& nodes() const { return nodes_; }
    const std::vector<GraphEdge>& edges() const { return edges_; }

    bool has_node(std::string_view name) const;

    /// Edges leaving / entering a node, in insertion order.
    std::vector<const GraphEdge*> out_edges(std::string_view name) const;
    std::vector<const GraphEdge*> in_edges(std::string_view name) const;

    void add_node(std::string_view name);
    void add_edge(std::string_view source, EdgeLabel label, std::string_view dest);

private:
    std::vector<std::string> nodes_;
    std::vector<GraphEdge> edges_;
    std::map<std::string, std::size_t, std::less<>> index_;
    std::vector<std::vector<std::size_t>> out_;
    std::vector<std::vector<std::size_t>> in_;
};

/// Materializes one edge per relation occurrence. Exclude constraints are
/// mirrored so exclusion queries are direction independent; included-in is
/// stored member -> container. Dangling references become phantom nodes.
FeatureGraph build_graph(const FeatureModel& model);

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

enum class Severity { Error, Warning };

enum class DiagCode {
    DuplicateFeature,
    DuplicateAttribute,
    DuplicateChild,
    MultipleGroups,
    SelfReference,
    Unresolved,
    Cycle,
    ImplyCycle,     // warning: cyclic imply chains are legal
    CaseCollision,  // warning: identifiers differing only by case
    Schema,         // JSON import problems
};

std::string_view severity_name(Severity severity);
std::string_view diag_code_name(DiagCode code);

struct Diagnostic {
    Severity severity = Severity::Error;
    DiagCode code = DiagCode::Schema;
    std::string feature;  // empty when not tied to one feature
    std::string message;

    bool operator==(const Diagnostic&) const = default;
};

/// True iff any diagnostic has Error severity.
bool has_errors(const std::vector<Diagnostic>& diagnostics);

/**
 * Checks every structural invariant and returns all findings in one pass;
 * never throws. An empty result means the model is well formed:
 *   - feature names unique (case collisions are only warned about),
 *   - every referenced name resolves to a declared feature,
 *   - at most one group decomposition per feature, no duplicate children,
 *     no self references, attribute keys unique,
 *   - the decomposition/containment hierarchy is acyclic. For the cycle
 *     check, included-in participates as container -> member, the same
 *     orientation as parent -> child, since a member and its container
 *     legitimately point at each other (a configuration lists a variation
 *     that declares itself included in that configuration).
 * Constraint edges are exempt from the cycle rule; cyclic imply chains
 * produce a warning only.
 */
std::vector<Diagnostic> validate(const FeatureModel& model);

// ---------------------------------------------------------------------------
// Graph queries
// ---------------------------------------------------------------------------

/**
 * Every feature that might affect `feature_name`: the transitive closure of
 * hierarchy edges (decomposition, select, variation, default, and included-in
 * taken as container -> member) walked in reverse. The feature itself is
 * excluded. Throws UnknownFeatureError for unknown names.
 */
std::set<std::string> ancestors(const FeatureGraph& graph, std::string_view feature_name);

/// Immediate reverse neighbors of a node, grouped by edge label; each group
/// keeps edge insertion order. Throws UnknownFeatureError for unknown names.
std::map<EdgeLabel, std::vector<std::string>> dependents(const FeatureGraph& graph,
                                                         std::string_view feature_name);

}  // namespace fmre
