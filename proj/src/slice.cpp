#include "fmre/slice.hpp"

#include <algorithm>

namespace fmre {

std::string_view direction_name(SliceDirection direction) {
    return direction == SliceDirection::Forward ? "FORWARD" : "BACKWARD";
}

std::string_view relation_name(SliceRelation relation) {
    return relation == SliceRelation::And ? "AND" : "OR";
}

namespace {

std::string query_error_message(SliceQueryError::Kind kind, const std::string& name) {
    switch (kind) {
        case SliceQueryError::Kind::UnknownFeature:
            return "unknown feature '" + name + "'";
        case SliceQueryError::Kind::UnknownAlternative:
            return "unknown alternative feature '" + name + "'";
        case SliceQueryError::Kind::AlternativesWithAnd:
            return "alternative features are only meaningful with the OR relation";
        case SliceQueryError::Kind::AlternativeEqualsFeature:
            return "alternative '" + name + "' is the sliced feature itself";
    }
    return "invalid slice query";
}

}  // namespace

SliceQueryError::SliceQueryError(Kind kind, std::string name)
    : std::runtime_error(query_error_message(kind, name)), kind_(kind), name_(std::move(name)) {}

namespace {

// Immediate decomposition targets of a feature, in clause declaration order:
// and-children, select base and variations, default target. Xor/or children
// are not compulsory and are left out.
std::vector<std::string> forward_targets(const Feature& f) {
    std::vector<std::string> targets;
    auto push = [&targets](const std::string& name) {
        if (std::find(targets.begin(), targets.end(), name) == targets.end()) {
            targets.push_back(name);
        }
    };
    for (const auto& d : f.decompositions) {
        switch (d.kind) {
            case DecompositionKind::And:
                for (const auto& c : d.children) push(c);
                break;
            case DecompositionKind::Select:
                push(d.base);
                for (const auto& v : d.variations) push(v);
                break;
            case DecompositionKind::Default:
                push(d.target);
                break;
            case DecompositionKind::Xor:
            case DecompositionKind::Or:
                break;
        }
    }
    return targets;
}

std::vector<std::string> imply_targets(const Feature& f) {
    std::vector<std::string> targets;
    for (const auto& c : f.constraints) {
        if (c.kind == ConstraintKind::Imply) targets.push_back(c.target);
    }
    return targets;
}

/**
 * Breadth-first forward closure. Every member expands its imply targets;
 * every member except `root` also expands its decomposition targets. The
 * root's decomposition targets are the seeds of sibling slices, so expanding
 * them here would merge the per-child slices back together. When
 * `expand_root` is set (the OR relation), the root expands fully as well.
 */
std::set<std::string> forward_closure(const FeatureModel& model, const std::string& root,
                                      const std::vector<std::string>& seeds, bool expand_root) {
    std::set<std::string> members{root};
    std::vector<std::string> queue{root};
    auto enqueue = [&](const std::string& name) {
        if (members.insert(name).second) queue.push_back(name);
    };
    for (const auto& s : seeds) enqueue(s);

    for (std::size_t i = 0; i < queue.size(); ++i) {
        const std::string current = queue[i];
        const Feature* f = model.find(current);
        if (f == nullptr) continue;  // phantom reference; validate reports it
        if (expand_root || current != root) {
            for (const auto& t : forward_targets(*f)) enqueue(t);
        }
        for (const auto& t : imply_targets(*f)) enqueue(t);
    }
    return members;
}

// Post-closure reject filtering: drop every feature named by a reject
// constraint of an in-slice configuration, except protected ones (the
// queried feature and explicit alternatives stay reportable).
void apply_reject_filter(const FeatureModel& model, std::set<std::string>& members,
                         const std::set<std::string>& protected_features) {
    std::set<std::string> rejected;
    for (const auto& name : members) {
        const Feature* f = model.find(name);
        if (f == nullptr) continue;
        for (const auto& c : f->constraints) {
            if (c.kind != ConstraintKind::Reject) continue;
            if (members.count(c.target) != 0 && protected_features.count(c.target) == 0) {
                rejected.insert(c.target);
            }
        }
    }
    for (const auto& r : rejected) members.erase(r);
}

const Feature& require_feature(const FeatureModel& model, std::string_view name) {
    const Feature* f = model.find(name);
    if (f == nullptr) throw UnknownFeatureError(std::string(name));
    return *f;
}

}  // namespace

FeatureModel restrict_model(const FeatureModel& model, const std::set<std::string>& keep) {
    FeatureModel sub;
    sub.name = model.name;
    for (const auto& f : model.features) {
        if (keep.count(f.name) == 0) continue;
        Feature copy;
        copy.name = f.name;
        copy.attributes = f.attributes;
        for (const auto& d : f.decompositions) {
            switch (d.kind) {
                case DecompositionKind::And:
                case DecompositionKind::Xor:
                case DecompositionKind::Or: {
                    std::vector<std::string> children;
                    for (const auto& c : d.children) {
                        if (keep.count(c) != 0) children.push_back(c);
                    }
                    if (!children.empty()) {
                        copy.decompositions.push_back(Decomposition::group(d.kind, std::move(children)));
                    }
                    break;
                }
                case DecompositionKind::Select: {
                    if (keep.count(d.base) == 0) break;
                    std::vector<std::string> variations;
                    for (const auto& v : d.variations) {
                        if (keep.count(v) != 0) variations.push_back(v);
                    }
                    copy.decompositions.push_back(Decomposition::select(d.base, std::move(variations)));
                    break;
                }
                case DecompositionKind::Default:
                    if (keep.count(d.target) != 0) {
                        copy.decompositions.push_back(Decomposition::fallback(d.target));
                    }
                    break;
            }
        }
        for (const auto& c : f.constraints) {
            if (keep.count(c.target) != 0) copy.constraints.push_back(c);
        }
        for (const auto& container : f.included_in) {
            if (keep.count(container) != 0) copy.included_in.push_back(container);
        }
        sub.features.push_back(std::move(copy));
    }
    return sub;
}

std::vector<FeatureModel> select_and(const FeatureModel& model, std::string_view feature_name) {
    const Feature& f = require_feature(model, feature_name);
    const std::vector<std::string> seeds = forward_targets(f);

    std::vector<std::set<std::string>> member_sets;
    if (seeds.empty()) {
        member_sets.push_back(forward_closure(model, f.name, {}, false));
    } else {
        for (const auto& seed : seeds) {
            member_sets.push_back(forward_closure(model, f.name, {seed}, false));
        }
    }

    std::vector<FeatureModel> slices;
    slices.reserve(member_sets.size());
    for (auto& members : member_sets) {
        apply_reject_filter(model, members, {f.name});
        slices.push_back(restrict_model(model, members));
    }
    return slices;
}

std::vector<FeatureModel> select_or(const FeatureModel& model, std::string_view feature_name,
                                    const std::vector<std::string>& alternatives) {
    const Feature& f = require_feature(model, feature_name);
    std::set<std::string> protected_features{f.name};
    std::set<std::string> members = forward_closure(model, f.name, {}, true);
    for (const auto& alt : alternatives) {
        const Feature& a = require_feature(model, alt);
        if (a.name == f.name) {
            throw SliceQueryError(SliceQueryError::Kind::AlternativeEqualsFeature, a.name);
        }
        protected_features.insert(a.name);
        members.merge(forward_closure(model, a.name, {}, true));
    }

    // A parent whose or/xor group covers the feature and an alternative ties
    // the slice together; it joins without being expanded, and its group is
    // restricted to in-slice members when the sub-model is built.
    for (const auto& alt : alternatives) {
        for (const auto& p : model.features) {
            for (const auto& d : p.decompositions) {
                if (d.kind != DecompositionKind::Xor && d.kind != DecompositionKind::Or) continue;
                const bool has_f =
                    std::find(d.children.begin(), d.children.end(), f.name) != d.children.end();
                const bool has_a =
                    std::find(d.children.begin(), d.children.end(), alt) != d.children.end();
                if (has_f && has_a) members.insert(p.name);
            }
        }
    }

    apply_reject_filter(model, members, protected_features);
    std::vector<FeatureModel> slices;
    slices.push_back(restrict_model(model, members));
    return slices;
}

std::vector<FeatureModel> parent_slice(const FeatureModel& model, std::string_view feature_name) {
    const Feature& f = require_feature(model, feature_name);
    const FeatureGraph graph = build_graph(model);
    std::set<std::string> members = ancestors(graph, f.name);
    members.insert(f.name);
    std::vector<FeatureModel> slices;
    slices.push_back(restrict_model(model, members));
    return slices;
}

namespace {

struct ResolvedQuery {
    std::string feature;
    std::vector<std::string> alternatives;
};

ResolvedQuery resolve_query(const FeatureModel& model, const SliceQuery& query) {
    const Feature* f = resolve_feature(model, query.feature);
    if (f == nullptr) {
        throw SliceQueryError(SliceQueryError::Kind::UnknownFeature, query.feature);
    }
    if (query.relation == SliceRelation::And && !query.alternatives.empty()) {
        throw SliceQueryError(SliceQueryError::Kind::AlternativesWithAnd, query.feature);
    }
    ResolvedQuery resolved;
    resolved.feature = f->name;
    for (const auto& alt : query.alternatives) {
        const Feature* a = resolve_feature(model, alt);
        if (a == nullptr) {
            throw SliceQueryError(SliceQueryError::Kind::UnknownAlternative, alt);
        }
        if (a->name == resolved.feature) {
            throw SliceQueryError(SliceQueryError::Kind::AlternativeEqualsFeature, a->name);
        }
        resolved.alternatives.push_back(a->name);
    }
    return resolved;
}

}  // namespace

SliceResult slice(const FeatureModel& model, const SliceQuery& query) {
    const ResolvedQuery resolved = resolve_query(model, query);
    const MiningResult mined = feature_type_mining(model, resolved.feature);

    SliceResult result;
    result.query = query;
    result.kind = mined.kind;
    result.meaning = mined.meaning;
    if (query.direction == SliceDirection::Backward) {
        result.slices = parent_slice(model, resolved.feature);
    } else if (query.relation == SliceRelation::And) {
        result.slices = select_and(model, resolved.feature);
    } else {
        result.slices = select_or(model, resolved.feature, resolved.alternatives);
    }
    return result;
}

// ---------------------------------------------------------------------------
// Oracle
// ---------------------------------------------------------------------------

namespace {

// The oracle re-derives everything from the raw clause lists with full-pass
// fixed-point loops. No queue, no visited set, no FeatureGraph.

bool oracle_forward_pass(const FeatureModel& model, std::set<std::string>& members,
                         const std::string& root, bool expand_root) {
    bool changed = false;
    for (const auto& f : model.features) {
        if (members.count(f.name) == 0) continue;
        const bool expand_decomp = expand_root || f.name != root;
        if (expand_decomp) {
            for (const auto& d : f.decompositions) {
                switch (d.kind) {
                    case DecompositionKind::And:
                        for (const auto& c : d.children) changed |= members.insert(c).second;
                        break;
                    case DecompositionKind::Select:
                        changed |= members.insert(d.base).second;
                        for (const auto& v : d.variations) changed |= members.insert(v).second;
                        break;
                    case DecompositionKind::Default:
                        changed |= members.insert(d.target).second;
                        break;
                    case DecompositionKind::Xor:
                    case DecompositionKind::Or:
                        break;
                }
            }
        }
        for (const auto& c : f.constraints) {
            if (c.kind == ConstraintKind::Imply) changed |= members.insert(c.target).second;
        }
    }
    return changed;
}

std::set<std::string> oracle_forward_closure(const FeatureModel& model, const std::string& root,
                                             const std::vector<std::string>& seeds,
                                             bool expand_root) {
    std::set<std::string> members{root};
    members.insert(seeds.begin(), seeds.end());
    while (oracle_forward_pass(model, members, root, expand_root)) {
    }
    return members;
}

std::set<std::string> oracle_backward_set(const FeatureModel& model, const std::string& root) {
    std::set<std::string> members{root};
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& f : model.features) {
            for (const auto& d : f.decompositions) {
                switch (d.kind) {
                    case DecompositionKind::And:
                    case DecompositionKind::Xor:
                    case DecompositionKind::Or:
                        for (const auto& c : d.children) {
                            if (members.count(c) != 0) changed |= members.insert(f.name).second;
                        }
                        break;
                    case DecompositionKind::Select:
                        if (members.count(d.base) != 0) changed |= members.insert(f.name).second;
                        for (const auto& v : d.variations) {
                            if (members.count(v) != 0) changed |= members.insert(f.name).second;
                        }
                        break;
                    case DecompositionKind::Default:
                        if (members.count(d.target) != 0) changed |= members.insert(f.name).second;
                        break;
                }
            }
            // included-in: the container is an ancestor of the member.
            if (members.count(f.name) != 0) {
                for (const auto& container : f.included_in) {
                    changed |= members.insert(container).second;
                }
            }
        }
    }
    return members;
}

std::vector<std::string> oracle_seeds(const Feature& f) {
    std::vector<std::string> seeds;
    for (const auto& d : f.decompositions) {
        switch (d.kind) {
            case DecompositionKind::And:
                for (const auto& c : d.children) {
                    if (std::find(seeds.begin(), seeds.end(), c) == seeds.end()) seeds.push_back(c);
                }
                break;
            case DecompositionKind::Select:
                if (std::find(seeds.begin(), seeds.end(), d.base) == seeds.end()) {
                    seeds.push_back(d.base);
                }
                for (const auto& v : d.variations) {
                    if (std::find(seeds.begin(), seeds.end(), v) == seeds.end()) seeds.push_back(v);
                }
                break;
            case DecompositionKind::Default:
                if (std::find(seeds.begin(), seeds.end(), d.target) == seeds.end()) {
                    seeds.push_back(d.target);
                }
                break;
            case DecompositionKind::Xor:
            case DecompositionKind::Or:
                break;
        }
    }
    return seeds;
}

void oracle_reject_filter(const FeatureModel& model, std::set<std::string>& members,
                          const std::set<std::string>& protected_features) {
    std::set<std::string> rejected;
    for (const auto& f : model.features) {
        if (members.count(f.name) == 0) continue;
        for (const auto& c : f.constraints) {
            if (c.kind == ConstraintKind::Reject && members.count(c.target) != 0 &&
                protected_features.count(c.target) == 0) {
                rejected.insert(c.target);
            }
        }
    }
    for (const auto& r : rejected) members.erase(r);
}

}  // namespace

SliceResult oracle_slice(const FeatureModel& model, const SliceQuery& query) {
    const ResolvedQuery resolved = resolve_query(model, query);
    const MiningResult mined = feature_type_mining(model, resolved.feature);

    std::vector<std::set<std::string>> member_sets;
    if (query.direction == SliceDirection::Backward) {
        member_sets.push_back(oracle_backward_set(model, resolved.feature));
    } else if (query.relation == SliceRelation::And) {
        const std::vector<std::string> seeds = oracle_seeds(*model.find(resolved.feature));
        if (seeds.empty()) {
            member_sets.push_back(oracle_forward_closure(model, resolved.feature, {}, false));
        } else {
            for (const auto& seed : seeds) {
                member_sets.push_back(oracle_forward_closure(model, resolved.feature, {seed}, false));
            }
        }
        std::set<std::string> protected_features{resolved.feature};
        for (auto& members : member_sets) {
            oracle_reject_filter(model, members, protected_features);
        }
    } else {
        std::set<std::string> members =
            oracle_forward_closure(model, resolved.feature, {}, true);
        std::set<std::string> protected_features{resolved.feature};
        for (const auto& alt : resolved.alternatives) {
            protected_features.insert(alt);
            std::set<std::string> alt_members = oracle_forward_closure(model, alt, {}, true);
            members.insert(alt_members.begin(), alt_members.end());
        }
        for (const auto& alt : resolved.alternatives) {
            for (const auto& p : model.features) {
                for (const auto& d : p.decompositions) {
                    if (d.kind != DecompositionKind::Xor && d.kind != DecompositionKind::Or) continue;
                    bool has_f = false;
                    bool has_a = false;
                    for (const auto& c : d.children) {
                        has_f = has_f || c == resolved.feature;
                        has_a = has_a || c == alt;
                    }
                    if (has_f && has_a) members.insert(p.name);
                }
            }
        }
        oracle_reject_filter(model, members, protected_features);
        member_sets.push_back(std::move(members));
    }

    SliceResult result;
    result.query = query;
    result.kind = mined.kind;
    result.meaning = mined.meaning;
    for (auto& members : member_sets) {
        result.slices.push_back(restrict_model(model, members));
    }
    return result;
}

}  // namespace fmre
