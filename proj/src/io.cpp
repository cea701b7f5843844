#include "opstrata/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "opstrata/error.hpp"

namespace opstrata::io {

namespace {

[[noreturn]] void parse_error(const std::string& msg) { throw Error(ErrorCode::ParseError, msg); }

double finite_number(const Json& v) {
  if (!v.is_number()) parse_error("expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) parse_error("non-finite entry");
  return x;
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) parse_error(std::string("missing field '") + key + "'");
  return j.at(key);
}

Index index_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    parse_error(std::string("field '") + key + "' must be a nonnegative integer");
  }
  return v.get<Index>();
}

Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Vector vector_from_json(const Json& j) {
  if (!j.is_array()) parse_error("expected an array of numbers");
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = finite_number(j[i]);
  return v;
}

double angle_field(const Json& j, const char* key) { return finite_number(field(j, key)); }

Json invariant_to_json(const Invariant& inv) {
  Json out = {{"kind", std::string(to_string(inv.kind))}};
  if (inv.kind == InvariantKind::ConstantRank) out["rank"] = inv.rank;
  if (inv.subspace) out["subspace"] = subspace_to_json(*inv.subspace);
  return out;
}

Invariant invariant_from_json(const Json& j) {
  const Json& kind = field(j, "kind");
  if (!kind.is_string()) parse_error("invariant kind must be a string");
  const std::string k = kind.get<std::string>();
  if (k == "constant_rank") return Invariant::constant_rank(index_field(j, "rank"));
  if (k == "invertible") return Invariant::invertible();
  const Subspace s = subspace_from_json(field(j, "subspace"));
  if (k == "constant_kernel") return Invariant::constant_kernel(s);
  if (k == "constant_range") return Invariant::constant_range(s);
  if (k == "complemented_range") return Invariant::complemented_range(s);
  if (k == "complemented_kernel") return Invariant::complemented_kernel(s);
  parse_error("unknown invariant kind '" + k + "'");
}

std::ifstream open_in(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) parse_error("cannot open " + file.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + file.string());
  return out;
}

Matrix read_csv(const std::filesystem::path& file) {
  std::ifstream in = open_in(file);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      std::size_t used = 0;
      double x = 0.0;
      try {
        x = std::stod(cell, &used);
      } catch (const std::exception&) {
        parse_error("bad CSV cell '" + cell + "'");
      }
      if (cell.find_first_not_of(" \t\r", used) != std::string::npos || !std::isfinite(x)) {
        parse_error("bad CSV cell '" + cell + "'");
      }
      row.push_back(x);
    }
    if (!rows.empty() && row.size() != rows.front().size()) parse_error("ragged CSV rows");
    rows.push_back(std::move(row));
  }
  if (rows.empty() || rows.front().empty()) parse_error("empty CSV matrix");
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

}  // namespace

Json matrix_to_json(const Matrix& m) {
  Json data = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Matrix matrix_from_json(const Json& j) {
  const Index rows = index_field(j, "rows");
  const Index cols = index_field(j, "cols");
  const Json& data = field(j, "data");
  if (!data.is_array() || static_cast<Index>(data.size()) != rows * cols) {
    parse_error("matrix data length differs from rows*cols");
  }
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index c = 0; c < cols; ++c) m(i, c) = finite_number(data[i * cols + c]);
  }
  return m;
}

Json subspace_to_json(const Subspace& s) {
  return {{"ambient_dim", s.ambient_dim()}, {"basis", matrix_to_json(s.basis())}};
}

Subspace subspace_from_json(const Json& j) {
  const Index n = index_field(j, "ambient_dim");
  Matrix basis = matrix_from_json(field(j, "basis"));
  if (basis.rows() != n) parse_error("subspace basis rows differ from ambient_dim");
  if (basis.cols() == 0) return Subspace::zero(n);
  return Subspace::from_orthonormal(std::move(basis));
}

Json segment_to_json(const PathSegment& s) {
  Json out = std::visit(
      [](const auto& k) -> Json {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, AffineKind>) {
          return {{"kind", "affine"}, {"a", matrix_to_json(k.a)}, {"b", matrix_to_json(k.b)}};
        } else if constexpr (std::is_same_v<K, RightAffineKind>) {
          return {{"kind", "right_affine"},
                  {"t", matrix_to_json(k.t)},
                  {"a", matrix_to_json(k.a)},
                  {"b", matrix_to_json(k.b)}};
        } else {
          return {{"kind", std::is_same_v<K, RotationKind> ? "rotation" : "right_rotation"},
                  {"t", matrix_to_json(k.t)},
                  {"u", vector_to_json(k.u)},
                  {"v", vector_to_json(k.v)},
                  {"angle_from", k.angle_from},
                  {"angle_to", k.angle_to}};
        }
      },
      s.kind);
  Json invs = Json::array();
  for (const auto& inv : s.invariants) invs.push_back(invariant_to_json(inv));
  out["invariants"] = std::move(invs);
  out["provenance"] = s.provenance;
  out["reversed"] = s.reversed;
  return out;
}

PathSegment segment_from_json(const Json& j) {
  const Json& kind = field(j, "kind");
  if (!kind.is_string()) parse_error("segment kind must be a string");
  const std::string k = kind.get<std::string>();
  PathSegment seg;
  if (k == "affine") {
    seg.kind = AffineKind{matrix_from_json(field(j, "a")), matrix_from_json(field(j, "b"))};
  } else if (k == "right_affine") {
    seg.kind = RightAffineKind{matrix_from_json(field(j, "t")), matrix_from_json(field(j, "a")),
                               matrix_from_json(field(j, "b"))};
  } else if (k == "rotation" || k == "right_rotation") {
    Matrix t = matrix_from_json(field(j, "t"));
    Vector u = vector_from_json(field(j, "u"));
    Vector v = vector_from_json(field(j, "v"));
    const double from = angle_field(j, "angle_from");
    const double to = angle_field(j, "angle_to");
    const Index n = k == "rotation" ? t.rows() : t.cols();
    if (u.size() != n || v.size() != n) parse_error("rotation plane vectors have the wrong size");
    if (k == "rotation") {
      seg.kind = RotationKind{std::move(t), std::move(u), std::move(v), from, to};
    } else {
      seg.kind = RightRotationKind{std::move(t), std::move(u), std::move(v), from, to};
    }
  } else {
    parse_error("unknown segment kind '" + k + "'");
  }
  const Json& invs = field(j, "invariants");
  if (!invs.is_array()) parse_error("invariants must be an array");
  for (const auto& inv : invs) seg.invariants.push_back(invariant_from_json(inv));
  if (j.contains("provenance")) seg.provenance = j.at("provenance").get<std::string>();
  if (j.contains("reversed")) seg.reversed = j.at("reversed").get<bool>();
  // Shape checks happen by evaluating once.
  try {
    (void)seg.start();
  } catch (const std::exception& e) {
    parse_error(std::string("segment parameters are inconsistent: ") + e.what());
  }
  return seg;
}

Json path_to_json(const OperatorPath& p) {
  Json out = Json::array();
  for (const auto& seg : p.segments()) out.push_back(segment_to_json(seg));
  return out;
}

OperatorPath path_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) parse_error("a path file is a nonempty array of segments");
  PathSegment first = segment_from_json(j[0]);
  OperatorPath path(first.rows(), first.cols());
  path.append(std::move(first));
  for (std::size_t i = 1; i < j.size(); ++i) {
    try {
      path.append(segment_from_json(j[i]));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::ParseError) throw;
      parse_error("segment " + std::to_string(i) + ": " + e.what());
    }
  }
  return path;
}

Json certificate_to_json(const PathCertificate& c) {
  Json segs = Json::array();
  for (const auto& r : c.per_segment) {
    segs.push_back({{"segment_index", r.segment_index},
                    {"declared_invariants", r.declared_invariants},
                    {"min_leading_gap", r.min_leading_gap},
                    {"max_trailing_ratio", r.max_trailing_ratio},
                    {"max_kernel_angle", r.max_kernel_angle},
                    {"max_range_angle", r.max_range_angle},
                    {"min_complement_margin", r.min_complement_margin},
                    {"min_inverse_condition", r.min_inverse_condition},
                    {"endpoint_mismatch", r.endpoint_mismatch},
                    {"passed", r.passed}});
  }
  return {{"samples_per_segment", c.samples_per_segment},
          {"per_segment", std::move(segs)},
          {"verdict", c.passed ? "pass" : "fail"},
          {"first_failure", c.first_failure},
          {"wall_time", c.wall_time_seconds}};
}

Json read_json(const std::filesystem::path& file) {
  std::ifstream in = open_in(file);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    parse_error(file.string() + ": " + e.what());
  }
}

void write_json(const std::filesystem::path& file, const Json& j) {
  std::ofstream out = open_out(file);
  out << j.dump(2) << '\n';
}

Matrix read_matrix(const std::filesystem::path& file) {
  if (file.extension() == ".csv") return read_csv(file);
  return matrix_from_json(read_json(file));
}

void write_matrix(const std::filesystem::path& file, const Matrix& m) {
  write_json(file, matrix_to_json(m));
}

OperatorPath read_path(const std::filesystem::path& file) { return path_from_json(read_json(file)); }

void write_path(const std::filesystem::path& file, const OperatorPath& p) {
  write_json(file, path_to_json(p));
}

StratumSpec parse_stratum(const std::string& text, Index rows, Index cols) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) parse_error("stratum must be rank:k or fredholm:m,n");
  const std::string kind = text.substr(0, colon);
  const std::string args = text.substr(colon + 1);
  const auto number = [&](const std::string& s) -> Index {
    std::size_t used = 0;
    long long v = -1;
    try {
      v = std::stoll(s, &used);
    } catch (const std::exception&) {
      parse_error("bad number '" + s + "' in stratum '" + text + "'");
    }
    if (used != s.size() || v < 0) parse_error("bad number '" + s + "' in stratum '" + text + "'");
    return static_cast<Index>(v);
  };
  try {
    if (kind == "rank") return StratumSpec::rank_stratum(number(args), cols, rows);
    if (kind == "fredholm") {
      const auto comma = args.find(',');
      if (comma == std::string::npos) parse_error("fredholm stratum needs m,n");
      return StratumSpec::fredholm(number(args.substr(0, comma)), number(args.substr(comma + 1)),
                                   cols, rows);
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ParseError) throw;
    parse_error(std::string("stratum '") + text + "': " + e.what());
  }
  parse_error("unknown stratum kind '" + kind + "'");
}

}  // namespace opstrata::io
