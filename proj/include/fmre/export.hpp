/**
 * @file export.hpp
 * @brief Deterministic DOT and JSON serialization of feature models.
 *
 * DOT output renders the derived graph for standard layout toolchains:
 * one node per feature (configuration features drawn with a double border),
 * one edge per graph edge labeled with its kind. Mirrored exclude pairs are
 * drawn once, undirected; reject edges are dashed.
 *
 * JSON is the machine interchange format (`.fm` text stays the human source
 * of truth). Schema, with keys in this fixed order and arrays in declaration
 * order:
 *
 *   {
 *     "schema": 1,
 *     "name": "...",
 *     "features": [
 *       {
 *         "name": "...",
 *         "attributes": [{"key": "...", "values": ["..."]}],
 *         "decompositions": [
 *           {"kind": "and"|"xor"|"or", "children": ["..."]},
 *           {"kind": "select", "base": "...", "variations": ["..."]},
 *           {"kind": "default", "target": "..."}
 *         ],
 *         "constraints": [{"kind": "imply"|"exclude"|"reject", "target": "..."}],
 *         "included_in": ["..."]
 *       }
 *     ]
 *   }
 *
 * Equal models serialize to byte-identical output in both formats.
 */
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fmre/core.hpp"

namespace fmre {

enum class ExportFormat { Dot, Json };

std::string to_dot(const FeatureModel& model);
std::string to_json(const FeatureModel& model);

struct JsonImportResult {
    std::optional<FeatureModel> model;  // set iff diagnostics carry no error
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return model.has_value(); }
};

/// Inverse of to_json. Unknown keys are rejected; problems are reported with
/// JSON-pointer style paths. A structurally intact model is then validated,
/// so imports that violate model invariants (duplicate feature names,
/// dangling references) fail too.
JsonImportResult from_json(std::string_view text);

}  // namespace fmre
