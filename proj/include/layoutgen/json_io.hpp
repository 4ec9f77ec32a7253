#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "layoutgen/constraint.hpp"
#include "layoutgen/geometry.hpp"
#include "layoutgen/retrieval.hpp"

namespace layoutgen {

using Json = nlohmann::json;

// All readers throw Error(DataError) on malformed input.

Json box_to_json(const BoundingBox& b);  // [left, top, width, height]
BoundingBox box_from_json(const Json& j);

Json layout_to_json(const Layout& y);
Layout layout_from_json(const Json& j);

Json domain_to_json(const DomainConfig& d);
DomainConfig domain_from_json(const Json& j);

Json relation_to_json(const Relation& r);
Relation relation_from_json(const Json& j);

/// Constraint payload tagged by "kind" (types, types_sizes, relations,
/// partial, noisy, content, text).
Json constraint_to_json(const ConstraintSpec& c);
ConstraintSpec constraint_from_json(const Json& j);

Json exemplar_to_json(const Exemplar& e);
Exemplar exemplar_from_json(const Json& j, const CanvasSpec& canvas);

Json index_to_json(const ExemplarIndex& index);
ExemplarIndex index_from_json(const Json& j);

void save_index(const ExemplarIndex& index, const std::filesystem::path& path);
ExemplarIndex load_index(const std::filesystem::path& path);

/// One JSON document per non-blank line.
std::vector<Json> read_jsonl(const std::filesystem::path& path);
void write_jsonl(const std::filesystem::path& path, const std::vector<Json>& rows);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace layoutgen
