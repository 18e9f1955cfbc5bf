#include "fmre/core.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

namespace fmre {

namespace {

std::string normalize_lookup_key(std::string_view name) {
    std::string key;
    key.reserve(name.size());
    for (char c : name) {
        if (c == '-') {
            key.push_back('_');
        } else {
            key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        }
    }
    return key;
}

std::string casefold(std::string_view name) {
    std::string key;
    key.reserve(name.size());
    for (char c : name) key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    return key;
}

}  // namespace

Decomposition Decomposition::group(DecompositionKind kind, std::vector<std::string> children) {
    Decomposition d;
    d.kind = kind;
    d.children = std::move(children);
    return d;
}

Decomposition Decomposition::select(std::string base, std::vector<std::string> variations) {
    Decomposition d;
    d.kind = DecompositionKind::Select;
    d.base = std::move(base);
    d.variations = std::move(variations);
    return d;
}

Decomposition Decomposition::fallback(std::string target) {
    Decomposition d;
    d.kind = DecompositionKind::Default;
    d.target = std::move(target);
    return d;
}

const Decomposition* Feature::group_decomposition() const {
    for (const auto& d : decompositions) {
        if (d.kind == DecompositionKind::And || d.kind == DecompositionKind::Xor ||
            d.kind == DecompositionKind::Or) {
            return &d;
        }
    }
    return nullptr;
}

const Feature* FeatureModel::find(std::string_view feature_name) const {
    for (const auto& f : features) {
        if (f.name == feature_name) return &f;
    }
    return nullptr;
}

UnknownFeatureError::UnknownFeatureError(std::string feature_name)
    : std::runtime_error("unknown feature '" + feature_name + "'"), name_(std::move(feature_name)) {}

const Feature* resolve_feature(const FeatureModel& model, std::string_view query) {
    if (const Feature* exact = model.find(query)) return exact;
    const std::string key = normalize_lookup_key(query);
    const Feature* match = nullptr;
    for (const auto& f : model.features) {
        if (normalize_lookup_key(f.name) == key) {
            if (match != nullptr) return nullptr;  // ambiguous
            match = &f;
        }
    }
    return match;
}

// ---------------------------------------------------------------------------
// FeatureGraph
// ---------------------------------------------------------------------------

std::string_view edge_label_name(EdgeLabel label) {
    switch (label) {
        case EdgeLabel::DecompAnd: return "and";
        case EdgeLabel::DecompXor: return "xor";
        case EdgeLabel::DecompOr: return "or";
        case EdgeLabel::Select: return "select";
        case EdgeLabel::Variation: return "variation";
        case EdgeLabel::Default: return "default";
        case EdgeLabel::Imply: return "imply";
        case EdgeLabel::Exclude: return "exclude";
        case EdgeLabel::Reject: return "reject";
        case EdgeLabel::IncludedIn: return "included-in";
    }
    return "?";
}

bool FeatureGraph::has_node(std::string_view name) const {
    return index_.find(name) != index_.end();
}

void FeatureGraph::add_node(std::string_view name) {
    if (has_node(name)) return;
    index_.emplace(std::string(name), nodes_.size());
    nodes_.emplace_back(name);
    out_.emplace_back();
    in_.emplace_back();
}

void FeatureGraph::add_edge(std::string_view source, EdgeLabel label, std::string_view dest) {
    add_node(source);
    add_node(dest);
    const std::size_t si = index_.find(source)->second;
    const std::size_t di = index_.find(dest)->second;
    // Edge set semantics: an identical (source, label, dest) triple is kept once.
    for (std::size_t ei : out_[si]) {
        const GraphEdge& e = edges_[ei];
        if (e.label == label && e.dest == dest) return;
    }
    edges_.push_back(GraphEdge{std::string(source), label, std::string(dest)});
    out_[si].push_back(edges_.size() - 1);
    in_[di].push_back(edges_.size() - 1);
}

std::vector<const GraphEdge*> FeatureGraph::out_edges(std::string_view name) const {
    std::vector<const GraphEdge*> result;
    auto it = index_.find(name);
    if (it == index_.end()) return result;
    result.reserve(out_[it->second].size());
    for (std::size_t ei : out_[it->second]) result.push_back(&edges_[ei]);
    return result;
}

std::vector<const GraphEdge*> FeatureGraph::in_edges(std::string_view name) const {
    std::vector<const GraphEdge*> result;
    auto it = index_.find(name);
    if (it == index_.end()) return result;
    result.reserve(in_[it->second].size());
    for (std::size_t ei : in_[it->second]) result.push_back(&edges_[ei]);
    return result;
}

FeatureGraph build_graph(const FeatureModel& model) {
    FeatureGraph g;
    for (const auto& f : model.features) g.add_node(f.name);
    for (const auto& f : model.features) {
        for (const auto& d : f.decompositions) {
            switch (d.kind) {
                case DecompositionKind::And:
                    for (const auto& c : d.children) g.add_edge(f.name, EdgeLabel::DecompAnd, c);
                    break;
                case DecompositionKind::Xor:
                    for (const auto& c : d.children) g.add_edge(f.name, EdgeLabel::DecompXor, c);
                    break;
                case DecompositionKind::Or:
                    for (const auto& c : d.children) g.add_edge(f.name, EdgeLabel::DecompOr, c);
                    break;
                case DecompositionKind::Select:
                    g.add_edge(f.name, EdgeLabel::Select, d.base);
                    for (const auto& v : d.variations) g.add_edge(f.name, EdgeLabel::Variation, v);
                    break;
                case DecompositionKind::Default:
                    g.add_edge(f.name, EdgeLabel::Default, d.target);
                    break;
            }
        }
        for (const auto& c : f.constraints) {
            switch (c.kind) {
                case ConstraintKind::Imply:
                    g.add_edge(f.name, EdgeLabel::Imply, c.target);
                    break;
                case ConstraintKind::Exclude:
                    g.add_edge(f.name, EdgeLabel::Exclude, c.target);
                    g.add_edge(c.target, EdgeLabel::Exclude, f.name);
                    break;
                case ConstraintKind::Reject:
                    g.add_edge(f.name, EdgeLabel::Reject, c.target);
                    break;
            }
        }
        for (const auto& container : f.included_in) {
            g.add_edge(f.name, EdgeLabel::IncludedIn, container);
        }
    }
    return g;
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

std::string_view severity_name(Severity severity) {
    return severity == Severity::Error ? "error" : "warning";
}

std::string_view diag_code_name(DiagCode code) {
    switch (code) {
        case DiagCode::DuplicateFeature: return "DUPLICATE_FEATURE";
        case DiagCode::DuplicateAttribute: return "DUPLICATE_ATTRIBUTE";
        case DiagCode::DuplicateChild: return "DUPLICATE_CHILD";
        case DiagCode::MultipleGroups: return "MULTIPLE_GROUPS";
        case DiagCode::SelfReference: return "SELF_REFERENCE";
        case DiagCode::Unresolved: return "UNRESOLVED";
        case DiagCode::Cycle: return "CYCLE";
        case DiagCode::ImplyCycle: return "IMPLY_CYCLE";
        case DiagCode::CaseCollision: return "CASE_COLLISION";
        case DiagCode::Schema: return "SCHEMA";
    }
    return "?";
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
    return std::any_of(diagnostics.begin(), diagnostics.end(),
                       [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

namespace {

// Enumerates every feature-name reference a feature makes, with a short
// description of where, so validation messages can point at the clause.
void for_each_reference(const Feature& f,
                        const std::function<void(const std::string&, const char*)>& fn) {
    for (const auto& d : f.decompositions) {
        switch (d.kind) {
            case DecompositionKind::And:
            case DecompositionKind::Xor:
            case DecompositionKind::Or:
                for (const auto& c : d.children) fn(c, "decomposition");
                break;
            case DecompositionKind::Select:
                fn(d.base, "select base");
                for (const auto& v : d.variations) fn(v, "variation");
                break;
            case DecompositionKind::Default:
                fn(d.target, "default");
                break;
        }
    }
    for (const auto& c : f.constraints) fn(c.target, "constraint");
    for (const auto& c : f.included_in) fn(c, "included in");
}

// Reports each elementary cycle found by a depth-first walk once, as the
// node path that closes it.
struct CycleFinder {
    const std::vector<std::string>& nodes;
    const std::vector<std::vector<std::size_t>>& adjacency;
    std::vector<int> color;  // 0 white, 1 gray, 2 black
    std::vector<std::size_t> stack;
    std::vector<std::vector<std::size_t>> cycles;

    CycleFinder(const std::vector<std::string>& nodes,
                const std::vector<std::vector<std::size_t>>& adjacency)
        : nodes(nodes), adjacency(adjacency), color(nodes.size(), 0) {}

    void run() {
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (color[i] == 0) visit(i);
        }
    }

    void visit(std::size_t u) {
        color[u] = 1;
        stack.push_back(u);
        for (std::size_t v : adjacency[u]) {
            if (color[v] == 0) {
                visit(v);
            } else if (color[v] == 1) {
                auto it = std::find(stack.begin(), stack.end(), v);
                cycles.emplace_back(it, stack.end());
            }
        }
        stack.pop_back();
        color[u] = 2;
    }
};

std::string render_cycle(const std::vector<std::string>& nodes,
                         const std::vector<std::size_t>& cycle) {
    std::ostringstream out;
    for (std::size_t i : cycle) out << nodes[i] << " -> ";
    out << nodes[cycle.front()];
    return out.str();
}

}  // namespace

std::vector<Diagnostic> validate(const FeatureModel& model) {
    std::vector<Diagnostic> diags;

    std::set<std::string> declared;
    for (const auto& f : model.features) {
        if (!declared.insert(f.name).second) {
            diags.push_back({Severity::Error, DiagCode::DuplicateFeature, f.name,
                             "feature '" + f.name + "' declared more than once"});
        }
    }

    // Case-insensitive collisions between distinct names are worth a warning.
    std::map<std::string, std::set<std::string>> by_fold;
    for (const auto& name : declared) by_fold[casefold(name)].insert(name);
    for (const auto& [fold, names] : by_fold) {
        if (names.size() < 2) continue;
        std::string joined;
        for (const auto& n : names) {
            if (!joined.empty()) joined += "', '";
            joined += n;
        }
        diags.push_back({Severity::Warning, DiagCode::CaseCollision, *names.begin(),
                         "identifiers '" + joined + "' differ only by case"});
    }

    for (const auto& f : model.features) {
        int groups = 0;
        for (const auto& d : f.decompositions) {
            if (d.kind == DecompositionKind::And || d.kind == DecompositionKind::Xor ||
                d.kind == DecompositionKind::Or) {
                ++groups;
            }
            const std::vector<std::string>* list = nullptr;
            if (d.kind == DecompositionKind::Select) {
                list = &d.variations;
            } else if (d.kind != DecompositionKind::Default) {
                list = &d.children;
            }
            if (list != nullptr) {
                std::set<std::string> seen;
                for (const auto& c : *list) {
                    if (!seen.insert(c).second) {
                        diags.push_back({Severity::Error, DiagCode::DuplicateChild, f.name,
                                         "feature '" + c + "' appears twice in a clause of '" +
                                             f.name + "'"});
                    }
                }
            }
        }
        if (groups > 1) {
            diags.push_back({Severity::Error, DiagCode::MultipleGroups, f.name,
                             "feature '" + f.name + "' has more than one group decomposition"});
        }

        std::set<std::string> keys;
        for (const auto& a : f.attributes) {
            if (!keys.insert(a.key).second) {
                diags.push_back({Severity::Error, DiagCode::DuplicateAttribute, f.name,
                                 "attribute key '" + a.key + "' repeated on '" + f.name + "'"});
            }
        }

        for_each_reference(f, [&](const std::string& ref, const char* where) {
            if (ref == f.name) {
                diags.push_back({Severity::Error, DiagCode::SelfReference, f.name,
                                 "feature '" + f.name + "' references itself in a " +
                                     std::string(where) + " clause"});
            } else if (declared.find(ref) == declared.end()) {
                diags.push_back({Severity::Error, DiagCode::Unresolved, f.name,
                                 "reference to undeclared feature '" + ref + "' in a " +
                                     std::string(where) + " clause of '" + f.name + "'"});
            }
        });
    }

    // Hierarchy cycle check over decomposition, select, variation, default,
    // and included-in edges, the latter oriented container -> member.
    FeatureGraph graph = build_graph(model);
    const auto& nodes = graph.nodes();
    std::map<std::string, std::size_t, std::less<>> index;
    for (std::size_t i = 0; i < nodes.size(); ++i) index.emplace(nodes[i], i);

    std::vector<std::vector<std::size_t>> hier(nodes.size());
    std::vector<std::vector<std::size_t>> imply(nodes.size());
    for (const auto& e : graph.edges()) {
        const std::size_t s = index.find(e.source)->second;
        const std::size_t d = index.find(e.dest)->second;
        switch (e.label) {
            case EdgeLabel::DecompAnd:
            case EdgeLabel::DecompXor:
            case EdgeLabel::DecompOr:
            case EdgeLabel::Select:
            case EdgeLabel::Variation:
            case EdgeLabel::Default:
                hier[s].push_back(d);
                break;
            case EdgeLabel::IncludedIn:
                hier[d].push_back(s);  // container -> member
                break;
            case EdgeLabel::Imply:
                imply[s].push_back(d);
                break;
            default:
                break;
        }
    }

    CycleFinder hier_cycles(nodes, hier);
    hier_cycles.run();
    for (const auto& cycle : hier_cycles.cycles) {
        diags.push_back({Severity::Error, DiagCode::Cycle, nodes[cycle.front()],
                         render_cycle(nodes, cycle)});
    }

    CycleFinder imply_cycles(nodes, imply);
    imply_cycles.run();
    for (const auto& cycle : imply_cycles.cycles) {
        diags.push_back({Severity::Warning, DiagCode::ImplyCycle, nodes[cycle.front()],
                         "imply chain forms a cycle: " + render_cycle(nodes, cycle)});
    }

    return diags;
}

// ---------------------------------------------------------------------------
// Graph queries
// ---------------------------------------------------------------------------

namespace {

bool is_hierarchy_label(EdgeLabel label) {
    switch (label) {
        case EdgeLabel::DecompAnd:
        case EdgeLabel::DecompXor:
        case EdgeLabel::DecompOr:
        case EdgeLabel::Select:
        case EdgeLabel::Variation:
        case EdgeLabel::Default:
            return true;
        default:
            return false;
    }
}

// Hierarchy predecessors of a node: sources of incoming decomposition-family
// edges plus the containers the node declares itself included in.
std::vector<std::string> hierarchy_predecessors(const FeatureGraph& graph, std::string_view name) {
    std::vector<std::string> preds;
    for (const GraphEdge* e : graph.in_edges(name)) {
        if (is_hierarchy_label(e->label)) preds.push_back(e->source);
    }
    for (const GraphEdge* e : graph.out_edges(name)) {
        if (e->label == EdgeLabel::IncludedIn) preds.push_back(e->dest);
    }
    return preds;
}

}  // namespace

std::set<std::string> ancestors(const FeatureGraph& graph, std::string_view feature_name) {
    if (!graph.has_node(feature_name)) throw UnknownFeatureError(std::string(feature_name));
    std::set<std::string> result;
    std::vector<std::string> queue;
    std::set<std::string> visited;
    visited.insert(std::string(feature_name));
    queue.emplace_back(feature_name);
    for (std::size_t i = 0; i < queue.size(); ++i) {
        for (auto& p : hierarchy_predecessors(graph, queue[i])) {
            if (visited.insert(p).second) {
                result.insert(p);
                queue.push_back(std::move(p));
            }
        }
    }
    return result;
}

std::map<EdgeLabel, std::vector<std::string>> dependents(const FeatureGraph& graph,
                                                         std::string_view feature_name) {
    if (!graph.has_node(feature_name)) throw UnknownFeatureError(std::string(feature_name));
    std::map<EdgeLabel, std::vector<std::string>> result;
    for (const GraphEdge* e : graph.in_edges(feature_name)) {
        result[e->label].push_back(e->source);
    }
    return result;
}

}  // namespace fmre
