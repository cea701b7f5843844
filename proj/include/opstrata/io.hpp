#pragma once

#include <filesystem>
#include <string>

#include "opstrata/certify.hpp"
#include "json.hpp"

namespace opstrata::io {

using Json = nlohmann::json;

/// {"rows": r, "cols": c, "data": [row-major]}
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);
Json subspace_to_json(const Subspace& s);
Subspace subspace_from_json(const Json& j);
Json segment_to_json(const PathSegment& s);
PathSegment segment_from_json(const Json& j);
/// A path file is a JSON array of segments.
Json path_to_json(const OperatorPath& p);
OperatorPath path_from_json(const Json& j);
Json certificate_to_json(const PathCertificate& c);

/// Reads a matrix from JSON, or from CSV when the file ends in .csv.
Matrix read_matrix(const std::filesystem::path& file);
void write_matrix(const std::filesystem::path& file, const Matrix& m);
OperatorPath read_path(const std::filesystem::path& file);
void write_path(const std::filesystem::path& file, const OperatorPath& p);
Json read_json(const std::filesystem::path& file);
void write_json(const std::filesystem::path& file, const Json& j);

/// Parses "rank:k" or "fredholm:m,n" for a rows×cols ambient space.
StratumSpec parse_stratum(const std::string& text, Index rows, Index cols);

}  // namespace opstrata::io
