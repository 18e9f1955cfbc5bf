// fmre - feature model reverse engineering toolkit.
//
// Subcommands mirror the stages of the methodology the library implements:
// validate a model, normalize it (fmt), recognize a feature's pattern and
// meaning, slice the model forward or backward, and export to DOT or JSON.
// import-check closes the loop on exported JSON.
//
// Exit codes: 0 success, 1 problems in the input model (parse errors,
// validation errors, unknown features), 2 usage or I/O errors.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "fmre/core.hpp"
#include "fmre/export.hpp"
#include "fmre/parser.hpp"
#include "fmre/recognize.hpp"
#include "fmre/slice.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitModelError = 1;
constexpr int kExitUsage = 2;

bool color_enabled() {
    const char* env = std::getenv("FMRE_COLOR");
    if (env != nullptr && std::string_view(env) == "never") return false;
    return isatty(fileno(stderr)) != 0;
}

std::string colored_severity(fmre::Severity severity) {
    const std::string name{fmre::severity_name(severity)};
    if (!color_enabled()) return name;
    const char* code = severity == fmre::Severity::Error ? "\033[31m" : "\033[33m";
    return code + name + "\033[0m";
}

struct LoadedModel {
    fmre::FeatureModel model;
    std::vector<std::pair<std::string, fmre::SourceSpan>> feature_spans;
};

std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void print_parse_errors(const std::string& path, const std::vector<fmre::ParseError>& errors) {
    for (const auto& e : errors) {
        std::cerr << path << ':' << e.span.line << ':' << e.span.column << ": "
                  << colored_severity(fmre::Severity::Error) << ": SYNTAX: " << e.message << '\n';
    }
}

void print_diagnostics(const std::string& path, const LoadedModel& loaded,
                       const std::vector<fmre::Diagnostic>& diagnostics) {
    for (const auto& d : diagnostics) {
        std::cerr << path;
        for (const auto& [name, span] : loaded.feature_spans) {
            if (name == d.feature) {
                std::cerr << ':' << span.line << ':' << span.column;
                break;
            }
        }
        std::cerr << ": " << colored_severity(d.severity) << ": " << fmre::diag_code_name(d.code)
                  << ": " << d.message << '\n';
    }
}

// Parses the file; on failure prints errors and returns nullopt with the
// exit code in `status`.
std::optional<LoadedModel> load_model(const std::string& path, int& status) {
    const auto text = read_file(path);
    if (!text) {
        std::cerr << "fmre: cannot read file: " << path << '\n';
        status = kExitUsage;
        return std::nullopt;
    }
    fmre::ParseResult parsed = fmre::parse(*text);
    if (!parsed.ok()) {
        print_parse_errors(path, parsed.errors);
        status = kExitModelError;
        return std::nullopt;
    }
    return LoadedModel{std::move(*parsed.model), std::move(parsed.feature_spans)};
}

// Parse + validate; diagnostics are printed either way, errors abort.
std::optional<LoadedModel> load_valid_model(const std::string& path, int& status) {
    auto loaded = load_model(path, status);
    if (!loaded) return std::nullopt;
    const auto diagnostics = fmre::validate(loaded->model);
    print_diagnostics(path, *loaded, diagnostics);
    if (fmre::has_errors(diagnostics)) {
        status = kExitModelError;
        return std::nullopt;
    }
    return loaded;
}

int cmd_validate(const std::string& path) {
    int status = kExitOk;
    auto loaded = load_model(path, status);
    if (!loaded) return status;
    const auto diagnostics = fmre::validate(loaded->model);
    print_diagnostics(path, *loaded, diagnostics);
    return fmre::has_errors(diagnostics) ? kExitModelError : kExitOk;
}

int cmd_fmt(const std::string& path, bool write_in_place) {
    int status = kExitOk;
    auto loaded = load_model(path, status);
    if (!loaded) return status;
    const std::string canonical = fmre::print_canonical(loaded->model);
    if (write_in_place) {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) {
            std::cerr << "fmre: cannot write file: " << path << '\n';
            return kExitUsage;
        }
        out << canonical;
    } else {
        std::cout << canonical;
    }
    return kExitOk;
}

int cmd_recognize(const std::string& path, const std::string& feature, const std::string& format) {
    int status = kExitOk;
    auto loaded = load_valid_model(path, status);
    if (!loaded) return status;
    try {
        const fmre::MiningResult mined = fmre::feature_type_mining(loaded->model, feature);
        if (format == "json") {
            nlohmann::ordered_json j;
            j["feature"] = mined.meaning.name;
            j["kind"] = fmre::kind_name(mined.kind);
            j["meaning"]["name"] = mined.meaning.name;
            j["meaning"]["decomposition"] = mined.meaning.decomposition;
            j["meaning"]["constraint"] = mined.meaning.constraint;
            j["meaning"]["included_in"] = mined.meaning.included_in;
            if (!mined.meaning.variation_echo.empty()) {
                j["variation"] = mined.meaning.variation_echo;
            }
            std::cout << j.dump() << '\n';
        } else {
            std::cout << fmre::render_meaning_text(mined.kind, mined.meaning);
        }
    } catch (const fmre::UnknownFeatureError& e) {
        std::cerr << "fmre: " << e.what() << '\n';
        return kExitModelError;
    }
    return kExitOk;
}

int cmd_slice(const std::string& path, const std::string& feature, const std::string& direction,
              const std::string& relation, const std::vector<std::string>& alternatives,
              const std::string& out_dir, const std::string& format) {
    if (relation == "and" && !alternatives.empty()) {
        std::cerr << "fmre: --alt requires --relation or\n";
        return kExitUsage;
    }
    int status = kExitOk;
    auto loaded = load_valid_model(path, status);
    if (!loaded) return status;

    fmre::SliceQuery query;
    query.feature = feature;
    query.direction =
        direction == "backward" ? fmre::SliceDirection::Backward : fmre::SliceDirection::Forward;
    query.relation = relation == "or" ? fmre::SliceRelation::Or : fmre::SliceRelation::And;
    query.alternatives = alternatives;

    fmre::SliceResult result;
    try {
        result = fmre::slice(loaded->model, query);
    } catch (const std::runtime_error& e) {
        std::cerr << "fmre: " << e.what() << '\n';
        return kExitModelError;
    }

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        std::cerr << "fmre: cannot create output directory: " << out_dir << '\n';
        return kExitUsage;
    }
    const std::string ext = format == "dot" ? ".dot" : format == "json" ? ".json" : ".fm";
    for (std::size_t i = 0; i < result.slices.size(); ++i) {
        const std::filesystem::path file =
            std::filesystem::path(out_dir) / ("slice-" + std::to_string(i + 1) + ext);
        std::ofstream out(file, std::ios::binary | std::ios::trunc);
        if (!out) {
            std::cerr << "fmre: cannot write file: " << file.string() << '\n';
            return kExitUsage;
        }
        if (format == "dot") {
            out << fmre::to_dot(result.slices[i]);
        } else if (format == "json") {
            out << fmre::to_json(result.slices[i]);
        } else {
            out << fmre::print_canonical(result.slices[i]);
        }
    }
    std::cout << result.slices.size() << " slice(s)\n";
    return kExitOk;
}

int cmd_export(const std::string& path, const std::string& format) {
    int status = kExitOk;
    auto loaded = load_valid_model(path, status);
    if (!loaded) return status;
    if (format == "dot") {
        std::cout << fmre::to_dot(loaded->model);
    } else {
        std::cout << fmre::to_json(loaded->model);
    }
    return kExitOk;
}

int cmd_import_check(const std::string& path) {
    std::string text;
    if (path.empty() || path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        text = buf.str();
    } else {
        const auto file = read_file(path);
        if (!file) {
            std::cerr << "fmre: cannot read file: " << path << '\n';
            return kExitUsage;
        }
        text = *file;
    }
    const fmre::JsonImportResult result = fmre::from_json(text);
    const std::string label = path.empty() || path == "-" ? "<stdin>" : path;
    for (const auto& d : result.diagnostics) {
        std::cerr << label << ": " << colored_severity(d.severity) << ": "
                  << fmre::diag_code_name(d.code) << ": " << d.message << '\n';
    }
    return result.ok() ? kExitOk : kExitModelError;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"feature model recognition and slicing toolkit"};
    app.require_subcommand(1);

    std::string path;
    std::string feature;
    std::string direction = "forward";
    std::string relation = "and";
    std::vector<std::string> alternatives;
    std::string out_dir;
    std::string format;
    bool write_in_place = false;

    auto* validate = app.add_subcommand("validate", "check a model for structural problems");
    validate->add_option("file", path, "model file (.fm)")->required();

    auto* fmt = app.add_subcommand("fmt", "print (or rewrite) the canonical form");
    fmt->add_option("file", path, "model file (.fm)")->required();
    fmt->add_flag("-w,--write", write_in_place, "rewrite the file in place");

    auto* recognize = app.add_subcommand("recognize", "classify a feature and print its meaning");
    recognize->add_option("file", path, "model file (.fm)")->required();
    recognize->add_option("-f,--feature", feature, "feature to classify")->required();
    format = "text";
    recognize->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"text", "json"}));

    auto* slice = app.add_subcommand("slice", "compute forward/backward slices");
    slice->add_option("file", path, "model file (.fm)")->required();
    slice->add_option("-f,--feature", feature, "slicing criterion feature")->required();
    slice->add_option("-d,--direction", direction, "slice direction")
        ->check(CLI::IsMember({"forward", "backward"}))
        ->required();
    slice->add_option("-r,--relation", relation, "slice relation")
        ->check(CLI::IsMember({"and", "or"}))
        ->required();
    slice->add_option("-a,--alt", alternatives, "alternative feature (repeatable, OR only)");
    slice->add_option("-o,--out", out_dir, "directory for slice files")->required();
    std::string slice_format = "fm";
    slice->add_option("--format", slice_format, "slice file format")
        ->check(CLI::IsMember({"fm", "dot", "json"}));

    auto* exp = app.add_subcommand("export", "serialize a model to stdout");
    exp->add_option("file", path, "model file (.fm)")->required();
    std::string export_format;
    exp->add_option("--format", export_format, "output format")
        ->check(CLI::IsMember({"dot", "json"}))
        ->required();

    auto* import_check = app.add_subcommand("import-check", "verify a JSON export loads cleanly");
    std::string import_path;
    import_check->add_option("file", import_path, "JSON file (defaults to stdin)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    if (validate->parsed()) return cmd_validate(path);
    if (fmt->parsed()) return cmd_fmt(path, write_in_place);
    if (recognize->parsed()) return cmd_recognize(path, feature, format);
    if (slice->parsed()) {
        return cmd_slice(path, feature, direction, relation, alternatives, out_dir, slice_format);
    }
    if (exp->parsed()) return cmd_export(path, export_format);
    if (import_check->parsed()) return cmd_import_check(import_path);
    return kExitUsage;
}
