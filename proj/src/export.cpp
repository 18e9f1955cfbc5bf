#include "fmre/export.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "fmre/recognize.hpp"

namespace fmre {

// ---------------------------------------------------------------------------
// DOT
// ---------------------------------------------------------------------------

namespace {

bool dot_id_ok(std::string_view name) {
    if (name.empty()) return false;
    const unsigned char first = static_cast<unsigned char>(name.front());
    if (std::isalpha(first) == 0 && first != '_') return false;
    return std::all_of(name.begin(), name.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
    });
}

std::string dot_id(std::string_view name) {
    if (dot_id_ok(name)) return std::string(name);
    std::string quoted = "\"";
    for (char c : name) {
        if (c == '"' || c == '\\') quoted.push_back('\\');
        quoted.push_back(c);
    }
    quoted.push_back('"');
    return quoted;
}

}  // namespace

std::string to_dot(const FeatureModel& model) {
    std::ostringstream out;
    if (model.features.empty()) {
        out << "digraph " << dot_id(model.name) << " { }\n";
        return out.str();
    }

    const FeatureGraph graph = build_graph(model);
    out << "digraph " << dot_id(model.name) << " {\n";
    for (const auto& node : graph.nodes()) {
        const Feature* f = model.find(node);
        if (f != nullptr && recognize(*f) == FeatureKind::Configuration) {
            out << "  " << dot_id(node) << " [peripheries=2];\n";
        } else {
            out << "  " << dot_id(node) << ";\n";
        }
    }

    std::set<std::pair<std::string, std::string>> excludes_drawn;
    for (const auto& e : graph.edges()) {
        if (e.label == EdgeLabel::Exclude) {
            // Mirrored pair: draw the first direction encountered, once.
            if (excludes_drawn.count({e.dest, e.source}) != 0) continue;
            excludes_drawn.insert({e.source, e.dest});
            out << "  " << dot_id(e.source) << " -> " << dot_id(e.dest)
                << " [label=\"exclude\", dir=none];\n";
            continue;
        }
        out << "  " << dot_id(e.source) << " -> " << dot_id(e.dest) << " [label=\""
            << edge_label_name(e.label) << "\"";
        if (e.label == EdgeLabel::Reject) out << ", style=dashed";
        out << "];\n";
    }
    out << "}\n";
    return out.str();
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

namespace {

using ordered_json = nlohmann::ordered_json;

const char* decomposition_kind_name(DecompositionKind kind) {
    switch (kind) {
        case DecompositionKind::And: return "and";
        case DecompositionKind::Xor: return "xor";
        case DecompositionKind::Or: return "or";
        case DecompositionKind::Select: return "select";
        case DecompositionKind::Default: return "default";
    }
    return "?";
}

const char* constraint_kind_name(ConstraintKind kind) {
    switch (kind) {
        case ConstraintKind::Imply: return "imply";
        case ConstraintKind::Exclude: return "exclude";
        case ConstraintKind::Reject: return "reject";
    }
    return "?";
}

}  // namespace

std::string to_json(const FeatureModel& model) {
    ordered_json j;
    j["schema"] = 1;
    j["name"] = model.name;
    j["features"] = ordered_json::array();
    for (const auto& f : model.features) {
        ordered_json jf;
        jf["name"] = f.name;
        jf["attributes"] = ordered_json::array();
        for (const auto& a : f.attributes) {
            ordered_json ja;
            ja["key"] = a.key;
            ja["values"] = a.values;
            jf["attributes"].push_back(std::move(ja));
        }
        jf["decompositions"] = ordered_json::array();
        for (const auto& d : f.decompositions) {
            ordered_json jd;
            jd["kind"] = decomposition_kind_name(d.kind);
            switch (d.kind) {
                case DecompositionKind::And:
                case DecompositionKind::Xor:
                case DecompositionKind::Or:
                    jd["children"] = d.children;
                    break;
                case DecompositionKind::Select:
                    jd["base"] = d.base;
                    jd["variations"] = d.variations;
                    break;
                case DecompositionKind::Default:
                    jd["target"] = d.target;
                    break;
            }
            jf["decompositions"].push_back(std::move(jd));
        }
        jf["constraints"] = ordered_json::array();
        for (const auto& c : f.constraints) {
            ordered_json jc;
            jc["kind"] = constraint_kind_name(c.kind);
            jc["target"] = c.target;
            jf["constraints"].push_back(std::move(jc));
        }
        jf["included_in"] = f.included_in;
        j["features"].push_back(std::move(jf));
    }
    // replace, not throw: serialization has no error channel, and parsed
    // models are UTF-8 clean anyway (the lexer enforces it)
    return j.dump(-1, ' ', false, ordered_json::error_handler_t::replace) + "\n";
}

// ---------------------------------------------------------------------------
// JSON import
// ---------------------------------------------------------------------------

namespace {

struct Importer {
    std::vector<Diagnostic> diagnostics;

    void schema_error(const std::string& path, const std::string& message) {
        const std::string where = path.empty() ? message : path + ": " + message;
        diagnostics.push_back({Severity::Error, DiagCode::Schema, "", where});
    }

    bool require_keys(const ordered_json& obj, const std::string& path,
                      const std::vector<std::string>& required,
                      const std::vector<std::string>& optional) {
        bool ok = true;
        for (const auto& key : required) {
            if (!obj.contains(key)) {
                schema_error(path, "missing field: " + key);
                ok = false;
            }
        }
        for (const auto& item : obj.items()) {
            const std::string& key = item.key();
            if (std::find(required.begin(), required.end(), key) == required.end() &&
                std::find(optional.begin(), optional.end(), key) == optional.end()) {
                schema_error(path, "unknown field '" + key + "'");
                ok = false;
            }
        }
        return ok;
    }

    bool get_string(const ordered_json& obj, const std::string& path, const std::string& key,
                    std::string& out) {
        if (!obj[key].is_string()) {
            schema_error(path + "/" + key, "expected a string");
            return false;
        }
        out = obj[key].get<std::string>();
        return true;
    }

    bool get_string_array(const ordered_json& value, const std::string& path,
                          std::vector<std::string>& out) {
        if (!value.is_array()) {
            schema_error(path, "expected an array of strings");
            return false;
        }
        bool ok = true;
        for (std::size_t i = 0; i < value.size(); ++i) {
            if (!value[i].is_string()) {
                schema_error(path + "/" + std::to_string(i), "expected a string");
                ok = false;
                continue;
            }
            out.push_back(value[i].get<std::string>());
        }
        return ok;
    }

    void import_decomposition(const ordered_json& jd, const std::string& path, Feature& f) {
        if (!jd.is_object() || !jd.contains("kind") || !jd["kind"].is_string()) {
            schema_error(path, "expected an object with a string 'kind'");
            return;
        }
        const std::string kind = jd["kind"].get<std::string>();
        if (kind == "and" || kind == "xor" || kind == "or") {
            if (!require_keys(jd, path, {"kind", "children"}, {})) return;
            std::vector<std::string> children;
            if (!get_string_array(jd["children"], path + "/children", children)) return;
            const DecompositionKind k = kind == "and"   ? DecompositionKind::And
                                        : kind == "xor" ? DecompositionKind::Xor
                                                        : DecompositionKind::Or;
            f.decompositions.push_back(Decomposition::group(k, std::move(children)));
        } else if (kind == "select") {
            if (!require_keys(jd, path, {"kind", "base", "variations"}, {})) return;
            std::string base;
            std::vector<std::string> variations;
            if (!get_string(jd, path, "base", base)) return;
            if (!get_string_array(jd["variations"], path + "/variations", variations)) return;
            f.decompositions.push_back(Decomposition::select(std::move(base), std::move(variations)));
        } else if (kind == "default") {
            if (!require_keys(jd, path, {"kind", "target"}, {})) return;
            std::string target;
            if (!get_string(jd, path, "target", target)) return;
            f.decompositions.push_back(Decomposition::fallback(std::move(target)));
        } else {
            schema_error(path + "/kind", "unknown decomposition kind '" + kind + "'");
        }
    }

    void import_constraint(const ordered_json& jc, const std::string& path, Feature& f) {
        if (!jc.is_object()) {
            schema_error(path, "expected an object");
            return;
        }
        if (!require_keys(jc, path, {"kind", "target"}, {})) return;
        std::string kind;
        std::string target;
        if (!get_string(jc, path, "kind", kind) || !get_string(jc, path, "target", target)) return;
        if (kind == "imply") {
            f.constraints.push_back({ConstraintKind::Imply, std::move(target)});
        } else if (kind == "exclude") {
            f.constraints.push_back({ConstraintKind::Exclude, std::move(target)});
        } else if (kind == "reject") {
            f.constraints.push_back({ConstraintKind::Reject, std::move(target)});
        } else {
            schema_error(path + "/kind", "unknown constraint kind '" + kind + "'");
        }
    }

    Feature import_feature(const ordered_json& jf, const std::string& path) {
        Feature f;
        if (!jf.is_object()) {
            schema_error(path, "expected an object");
            return f;
        }
        if (!require_keys(jf, path, {"name"},
                          {"attributes", "decompositions", "constraints", "included_in"})) {
            return f;
        }
        get_string(jf, path, "name", f.name);
        if (jf.contains("attributes")) {
            const auto& arr = jf["attributes"];
            if (!arr.is_array()) {
                schema_error(path + "/attributes", "expected an array");
            } else {
                for (std::size_t i = 0; i < arr.size(); ++i) {
                    const std::string apath = path + "/attributes/" + std::to_string(i);
                    if (!arr[i].is_object()) {
                        schema_error(apath, "expected an object");
                        continue;
                    }
                    if (!require_keys(arr[i], apath, {"key", "values"}, {})) continue;
                    Attribute attr;
                    if (!get_string(arr[i], apath, "key", attr.key)) continue;
                    if (!get_string_array(arr[i]["values"], apath + "/values", attr.values)) continue;
                    f.attributes.push_back(std::move(attr));
                }
            }
        }
        if (jf.contains("decompositions")) {
            const auto& arr = jf["decompositions"];
            if (!arr.is_array()) {
                schema_error(path + "/decompositions", "expected an array");
            } else {
                for (std::size_t i = 0; i < arr.size(); ++i) {
                    import_decomposition(arr[i], path + "/decompositions/" + std::to_string(i), f);
                }
            }
        }
        if (jf.contains("constraints")) {
            const auto& arr = jf["constraints"];
            if (!arr.is_array()) {
                schema_error(path + "/constraints", "expected an array");
            } else {
                for (std::size_t i = 0; i < arr.size(); ++i) {
                    import_constraint(arr[i], path + "/constraints/" + std::to_string(i), f);
                }
            }
        }
        if (jf.contains("included_in")) {
            get_string_array(jf["included_in"], path + "/included_in", f.included_in);
        }
        return f;
    }
};

}  // namespace

JsonImportResult from_json(std::string_view text) {
    JsonImportResult result;
    ordered_json root = ordered_json::parse(text, nullptr, false);
    if (root.is_discarded()) {
        result.diagnostics.push_back(
            {Severity::Error, DiagCode::Schema, "", "input is not well-formed JSON"});
        return result;
    }

    Importer importer;
    if (!root.is_object()) {
        importer.schema_error("", "expected a JSON object");
        result.diagnostics = std::move(importer.diagnostics);
        return result;
    }
    importer.require_keys(root, "", {"name", "features"}, {"schema"});
    if (root.contains("schema") && root["schema"] != 1) {
        importer.schema_error("/schema", "unsupported schema version");
    }

    FeatureModel model;
    if (root.contains("name")) importer.get_string(root, "", "name", model.name);
    if (root.contains("features")) {
        const auto& arr = root["features"];
        if (!arr.is_array()) {
            importer.schema_error("/features", "expected an array");
        } else {
            for (std::size_t i = 0; i < arr.size(); ++i) {
                model.features.push_back(
                    importer.import_feature(arr[i], "/features/" + std::to_string(i)));
            }
        }
    }

    result.diagnostics = std::move(importer.diagnostics);
    if (has_errors(result.diagnostics)) return result;

    // A decodable document must still be a well-formed model.
    std::vector<Diagnostic> model_diags = validate(model);
    result.diagnostics.insert(result.diagnostics.end(), model_diags.begin(), model_diags.end());
    if (has_errors(result.diagnostics)) return result;

    result.model = std::move(model);
    return result;
}

}  // namespace fmre
