#pragma once

#include <string>

#include <json.hpp>

#include <emtrace/cocycles.hpp>
#include <emtrace/forms.hpp>
#include <emtrace/groups.hpp>

namespace emtrace::io {

using nlohmann::json;

json group_to_json(const FgAbGroup& g);
FgAbGroup group_from_json(const json& j);

/// Quadratic-form document: group + coefficients + the five labelled
/// coefficient arrays. Missing arrays default to zero; values are
/// coordinate vectors in the coefficient group.
json spec_to_json(const QuadraticFormParams& q);
QuadraticFormParams spec_from_json(const json& j);

/// Cocycle-table document: one row per h triple and per c pair, each row
/// carrying explicit coordinate vectors. Emission is canonical (rows in
/// enumeration order, sorted keys) so re-emitting a parsed file is
/// byte-identical.
json table_to_json(const TabulatedCocycle& tc);
TabulatedCocycle table_from_json(const json& j);

/// Same table emitted by direct closed-form evaluation; this is the build
/// path and also works when the coefficient group is infinite.
json table_to_json(const StructuredCocycle& sc);

std::string table_to_csv(const TabulatedCocycle& tc);
std::string table_to_csv(const StructuredCocycle& sc);
TabulatedCocycle table_from_csv(const std::string& text);

/// Canonical serialization for every document this tool writes.
std::string dump_document(const json& j);

QuadraticFormParams load_spec(const std::string& path);
TabulatedCocycle load_table(const std::string& path); // auto-detects JSON vs CSV
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

/// "4,6" -> torsion [4, 6]; "0" adds a Z factor; "1" is dropped; the empty
/// string (or "-") is the trivial group. extra_rank adds free factors.
FgAbGroup parse_group_descriptor(const std::string& torsion_csv, Coord extra_rank = 0);
GroupElement parse_element(const FgAbGroup& g, const std::string& coords_csv);

std::string format_params(const QuadraticFormParams& q);

} // namespace emtrace::io
