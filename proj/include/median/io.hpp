#pragma once

#include <median/algebra.hpp>
#include <median/morphism.hpp>
#include <median/sequence.hpp>
#include <median/superextension.hpp>

#include <json.hpp>

#include <filesystem>
#include <string>

namespace median::io {

using json = nlohmann::json;

inline constexpr int schema_version = 1;

json to_json(const MedianAlgebra & m);
json to_json(const MaximalLinkedSystem & s);
/// Source and target are embedded as algebra objects.
json to_json(const Epimorphism & f);
json to_json(const InverseSequence & seq);

/// Runs every algebra invariant; the canonical flag is recomputed.
MedianAlgebra algebra_from_json(const json & j);
MaximalLinkedSystem mls_from_json(const json & j);
/// "source"/"target" may be algebra objects or paths relative to base_dir.
Epimorphism epimorphism_from_json(const json & j, const std::filesystem::path & base_dir = {});
InverseSequence sequence_from_json(const json & j);

/// Sorted keys, two-space indent, trailing newline.
std::string dump(const json & j);

/// Throws ParseError on unreadable or malformed input.
json read_json_file(const std::filesystem::path & path);
void write_file(const std::filesystem::path & path, const std::string & text);

enum class DocumentKind { algebra, morphism, sequence };
DocumentKind detect_kind(const json & j);

/// Median graph: vertices in carrier order, an edge when interval(a,b) = {a,b}.
std::string to_dot(const MedianAlgebra & m);

} // namespace median::io
