#include "fmre/recognize.hpp"

#include <cctype>
#include <sstream>

#include "fmre/parser.hpp"

namespace fmre {

std::string_view kind_name(FeatureKind kind) {
    return kind == FeatureKind::Elementary ? "ELEMENTARY" : "CONFIGURATION";
}

FeatureKind recognize(const Feature& feature) {
    for (const auto& d : feature.decompositions) {
        if (d.kind == DecompositionKind::Select || d.kind == DecompositionKind::Default) {
            return FeatureKind::Configuration;
        }
    }
    for (const auto& c : feature.constraints) {
        if (c.kind == ConstraintKind::Reject) return FeatureKind::Configuration;
    }
    return FeatureKind::Elementary;
}

bool match_pattern(const Feature& feature, FeaturePattern pattern) {
    if (pattern == FeaturePattern::Configuration) {
        // The configuration grammar admits select, default, and the group
        // kinds, plus reject, imply, and exclude.
        return true;
    }
    for (const auto& d : feature.decompositions) {
        if (d.kind == DecompositionKind::Select || d.kind == DecompositionKind::Default) {
            return false;
        }
    }
    for (const auto& c : feature.constraints) {
        if (c.kind == ConstraintKind::Reject) return false;
    }
    return true;
}

MiningResult feature_type_mining(const FeatureModel& model, std::string_view feature_name) {
    const Feature* feature = resolve_feature(model, feature_name);
    if (feature == nullptr) throw UnknownFeatureError(std::string(feature_name));

    MiningResult result;
    result.kind = recognize(*feature);
    result.meaning.name = feature->name;
    for (const auto& d : feature->decompositions) {
        result.meaning.decomposition.push_back(render_decomposition(d));
    }
    for (const auto& c : feature->constraints) {
        result.meaning.constraint.push_back(render_constraint(c));
    }
    result.meaning.included_in = feature->included_in;
    for (const auto& a : feature->attributes) {
        if (a.key == "variation") {
            result.meaning.variation_echo = a.values;
            break;
        }
    }
    return result;
}

std::string render_included_in(const Meaning& meaning) {
    if (meaning.included_in.empty()) return "---";
    std::string out;
    for (const auto& c : meaning.included_in) {
        if (!out.empty()) out += ", ";
        out += c;
    }
    return out;
}

namespace {

// Report-style clause rendering: relation keywords capitalized, constraint
// targets bare, group decompositions kept in canonical prefix form.
std::string report_decomposition(const std::string& canonical) {
    if (canonical.rfind("select ", 0) == 0) {
        std::string text = "Select " + canonical.substr(7);
        std::string::size_type pos = 0;
        while ((pos = text.find("variation = ", pos)) != std::string::npos) {
            text[pos] = 'V';
            pos += 12;
        }
        return text;
    }
    if (canonical.rfind("default ", 0) == 0) return "Default " + canonical.substr(8);
    return canonical;
}

std::string report_constraint(const std::string& canonical) {
    const std::string::size_type open = canonical.find('(');
    if (open == std::string::npos || canonical.back() != ')') return canonical;
    std::string keyword = canonical.substr(0, open);
    if (!keyword.empty()) keyword[0] = static_cast<char>(std::toupper(keyword[0]));
    return keyword + " " + canonical.substr(open + 1, canonical.size() - open - 2);
}

std::string join_or_dashes(const std::vector<std::string>& items) {
    if (items.empty()) return "---";
    std::string out;
    for (const auto& s : items) {
        if (!out.empty()) out += "; ";
        out += s;
    }
    return out;
}

}  // namespace

std::string render_meaning_text(FeatureKind kind, const Meaning& meaning) {
    std::ostringstream out;
    out << "T = " << (kind == FeatureKind::Configuration ? "Configuration" : "Elementary")
        << " feature\n";
    out << "M = {Name: " << meaning.name << "\n";
    if (!meaning.variation_echo.empty()) {
        out << "Variation: ";
        for (std::size_t i = 0; i < meaning.variation_echo.size(); ++i) {
            if (i > 0) out << ", ";
            out << meaning.variation_echo[i];
        }
        out << "\n";
    }
    std::vector<std::string> decomp;
    for (const auto& d : meaning.decomposition) decomp.push_back(report_decomposition(d));
    std::vector<std::string> constr;
    for (const auto& c : meaning.constraint) constr.push_back(report_constraint(c));
    out << "Decomposition: " << join_or_dashes(decomp) << "\n";
    out << "Constraint: " << join_or_dashes(constr) << "\n";
    out << "Included in: " << render_included_in(meaning) << "\n";
    out << "}\n";
    return out.str();
}

}  // namespace fmre
