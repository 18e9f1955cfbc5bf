// Test support: deterministic random feature models, queries, and byte-level
// fuzz inputs. Generated models are valid by construction: every hierarchy
// relation (group child, select base/variation, default target) points from
// a lower feature index to a higher one and included-in containers are
// declared at lower indexes, so the containment hierarchy cannot cycle.
// Constraints may point anywhere except at their own feature.
#pragma once

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "fmre/core.hpp"
#include "fmre/slice.hpp"

namespace fmre::testing {

inline std::string feature_name(std::size_t i) {
    static const char* stems[] = {"core", "io", "net", "ui", "store", "auth", "log", "sync"};
    std::string name = stems[i % 8] + std::to_string(i);
    if (i % 5 == 1) name += "-opt";
    if (i % 7 == 3) name += "_alt";
    return name;
}

inline FeatureModel random_model(std::mt19937& rng, int max_features = 30) {
    std::uniform_int_distribution<int> size_dist(1, max_features);
    const std::size_t n = static_cast<std::size_t>(size_dist(rng));
    auto chance = [&rng](double p) {
        return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
    };
    auto pick = [&rng](std::size_t lo, std::size_t hi) {  // inclusive range
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
    };

    std::vector<std::string> names;
    names.reserve(n);
    for (std::size_t i = 0; i < n; ++i) names.push_back(feature_name(i));

    std::vector<DecompositionKind> group_kind(n, DecompositionKind::And);
    std::vector<bool> has_group(n, false);
    std::vector<std::vector<std::string>> group_children(n);

    FeatureModel model;
    model.name = "gen" + std::to_string(pick(0, 999));
    model.features.resize(n);

    for (std::size_t i = 1; i < n; ++i) {
        if (!chance(0.75)) continue;  // some features stay roots
        const std::size_t parent = pick(0, i - 1);
        if (!has_group[parent]) {
            has_group[parent] = true;
            const double r = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
            group_kind[parent] = r < 0.5   ? DecompositionKind::And
                                 : r < 0.75 ? DecompositionKind::Xor
                                            : DecompositionKind::Or;
        }
        group_children[parent].push_back(names[i]);
    }

    for (std::size_t i = 0; i < n; ++i) {
        Feature& f = model.features[i];
        f.name = names[i];

        if (chance(0.2)) {
            Attribute a;
            a.key = chance(0.5) ? "variation" : "kind";
            a.values.push_back(chance(0.8) ? names[pick(0, n - 1)] : "two words value");
            if (chance(0.3)) a.values.push_back("default");  // keyword-shaped value
            f.attributes.push_back(std::move(a));
        }

        if (has_group[i]) {
            f.decompositions.push_back(Decomposition::group(group_kind[i], group_children[i]));
        }

        // select / default clauses reference strictly later features
        if (i + 1 < n && chance(0.15)) {
            const std::size_t base = pick(i + 1, n - 1);
            std::vector<std::string> variations;
            const std::size_t var_count = pick(0, std::min<std::size_t>(3, n - 1 - i));
            std::set<std::size_t> chosen;
            while (chosen.size() < var_count) chosen.insert(pick(i + 1, n - 1));
            for (std::size_t v : chosen) variations.push_back(names[v]);
            f.decompositions.push_back(Decomposition::select(names[base], std::move(variations)));
        }
        if (i + 1 < n && chance(0.1)) {
            f.decompositions.push_back(Decomposition::fallback(names[pick(i + 1, n - 1)]));
        }

        if (n > 1) {
            std::set<std::pair<int, std::string>> used;
            const std::size_t constraint_count = chance(0.3) ? pick(1, 2) : 0;
            for (std::size_t k = 0; k < constraint_count; ++k) {
                std::size_t target = pick(0, n - 1);
                if (target == i) continue;
                const double r = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
                const ConstraintKind kind = r < 0.5   ? ConstraintKind::Imply
                                            : r < 0.8 ? ConstraintKind::Exclude
                                                      : ConstraintKind::Reject;
                if (!used.insert({static_cast<int>(kind), names[target]}).second) continue;
                f.constraints.push_back({kind, names[target]});
            }
        }

        if (i > 0 && chance(0.15)) {
            f.included_in.push_back(names[pick(0, i - 1)]);
        }
    }
    return model;
}

inline SliceQuery random_query(std::mt19937& rng, const FeatureModel& model) {
    std::uniform_int_distribution<std::size_t> feature_dist(0, model.features.size() - 1);
    auto chance = [&rng](double p) {
        return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
    };
    SliceQuery q;
    q.feature = model.features[feature_dist(rng)].name;
    q.direction = chance(0.5) ? SliceDirection::Forward : SliceDirection::Backward;
    q.relation = chance(0.5) ? SliceRelation::And : SliceRelation::Or;
    if (q.relation == SliceRelation::Or) {
        const std::size_t alt_count = chance(0.6) ? (chance(0.5) ? 1 : 2) : 0;
        std::set<std::string> alts;
        for (std::size_t k = 0; k < alt_count && model.features.size() > 1; ++k) {
            const std::string& name = model.features[feature_dist(rng)].name;
            if (name != q.feature) alts.insert(name);
        }
        q.alternatives.assign(alts.begin(), alts.end());
    }
    return q;
}

/// Feature-name sets of a result's slices, sorted, for multiset comparison.
inline std::vector<std::vector<std::string>> slice_name_sets(const SliceResult& result) {
    std::vector<std::vector<std::string>> sets;
    for (const auto& s : result.slices) {
        std::vector<std::string> names;
        for (const auto& f : s.features) names.push_back(f.name);
        std::sort(names.begin(), names.end());
        sets.push_back(std::move(names));
    }
    std::sort(sets.begin(), sets.end());
    return sets;
}

inline std::string random_bytes(std::mt19937& rng, std::size_t max_len = 120) {
    std::uniform_int_distribution<std::size_t> len_dist(0, max_len);
    std::uniform_int_distribution<int> byte_dist(0, 255);
    std::string out;
    const std::size_t len = len_dist(rng);
    out.reserve(len);
    for (std::size_t i = 0; i < len; ++i) out.push_back(static_cast<char>(byte_dist(rng)));
    return out;
}

/// Random flips, insertions, and deletions applied to well-formed text.
inline std::string mutate_text(std::mt19937& rng, std::string text) {
    if (text.empty()) return text;
    std::uniform_int_distribution<int> edits_dist(1, 6);
    std::uniform_int_distribution<int> byte_dist(0, 255);
    const int edits = edits_dist(rng);
    for (int e = 0; e < edits && !text.empty(); ++e) {
        std::uniform_int_distribution<std::size_t> pos_dist(0, text.size() - 1);
        const std::size_t pos = pos_dist(rng);
        switch (byte_dist(rng) % 3) {
            case 0: text[pos] = static_cast<char>(byte_dist(rng)); break;
            case 1: text.insert(pos, 1, static_cast<char>(byte_dist(rng))); break;
            default: text.erase(pos, 1); break;
        }
    }
    return text;
}

}  // namespace fmre::testing
