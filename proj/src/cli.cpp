#include "opstrata/cli.hpp"

#include <cstdlib>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "opstrata/certify.hpp"
#include "opstrata/error.hpp"
#include "opstrata/geometry.hpp"
#include "opstrata/io.hpp"
#include "opstrata/random.hpp"

namespace opstrata {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCertificateFail = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitInfeasible = 3;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::StratumDisconnected:
    case ErrorCode::HypothesisViolated:
    case ErrorCode::NumericalDegeneracy:
    case ErrorCode::InfeasibleHop:
    case ErrorCode::NotComplementary:
    case ErrorCode::NumericallySingular:
    case ErrorCode::SingularMatrix:
    case ErrorCode::NoSpareDirection:
    case ErrorCode::NotInRange:
      return kExitInfeasible;
    default:
      return kExitInvalid;
  }
}

void print_json(const io::Json& j) { std::cout << j.dump(2) << '\n'; }

int run_connect(const std::vector<std::string>& inputs, const std::string& stratum,
                const std::string& out, double tol) {
  if (inputs.size() != 2) throw Error(ErrorCode::InvalidArgument, "connect needs exactly two --in");
  const Matrix t1 = io::read_matrix(inputs[0]);
  const Matrix t2 = io::read_matrix(inputs[1]);
  if (t1.rows() != t2.rows() || t1.cols() != t2.cols()) {
    throw Error(ErrorCode::ShapeMismatch, "inputs have different shapes");
  }
  const StratumSpec spec = io::parse_stratum(stratum, t1.rows(), t1.cols());
  OperatorPath path;
  if (spec.variant == StratumSpec::Variant::Rank) {
    for (const Matrix* t : {&t1, &t2}) {
      const Index r = numerical_rank(*t, tol).rank;
      if (r != spec.rank) {
        throw Error(ErrorCode::RankMismatch, "input has rank " + std::to_string(r) +
                                                 ", stratum asks for " + std::to_string(spec.rank));
      }
    }
    path = connect_rank_stratum(t1, t2, tol);
  } else {
    path = connect_fredholm(t1, t2, spec, tol);
  }
  io::write_path(out, path);
  std::cout << "wrote " << path.size() << " segments to " << out << '\n';
  return kExitOk;
}

int run_certify(const std::string& path_file, const std::string& stratum, int samples,
                const std::string& report, double tol) {
  const OperatorPath path = io::read_path(path_file);
  const StratumSpec spec = io::parse_stratum(stratum, path.rows(), path.cols());
  const PathCertificate cert = certify(path, spec, samples, tol);
  if (!report.empty()) io::write_json(report, io::certificate_to_json(cert));
  if (cert.passed) {
    std::cout << "pass: " << path.size() << " segments, " << samples << " intervals each\n";
    return kExitOk;
  }
  std::cout << "fail: " << cert.first_failure << '\n';
  return kExitCertificateFail;
}

int run_tangent_dim(const std::string& in, double tol) {
  const TangentSpaceReport r = tangent_space_dim(io::read_matrix(in), tol);
  print_json({{"base_point_rank", r.base_point_rank},
              {"ambient_dim", r.ambient_dim},
              {"tangent_dim", r.tangent_dim},
              {"complement_dim", r.complement_dim},
              {"formula_dim", r.formula_dim},
              {"residual", r.residual},
              {"agrees", r.agrees()}});
  return r.agrees() ? kExitOk : kExitCertificateFail;
}

int run_stratify(Index m, Index n, std::uint64_t seed) {
  const StratificationReport r = stratification_report(m, n, seed);
  io::Json strata = io::Json::array();
  bool ok = r.generic_in_top_stratum;
  for (const auto& e : r.strata) {
    strata.push_back({{"rank", e.rank}, {"dim", e.dim}, {"certified", e.certified}});
    ok = ok && e.certified;
  }
  print_json({{"rows", r.rows},
              {"cols", r.cols},
              {"strata", std::move(strata)},
              {"generic_in_top_stratum", r.generic_in_top_stratum}});
  return ok ? kExitOk : kExitCertificateFail;
}

int run_common_complement(const std::vector<std::string>& inputs, const std::string& out) {
  if (inputs.size() != 2) {
    throw Error(ErrorCode::InvalidArgument, "common-complement needs exactly two --in");
  }
  const Subspace e1 = Subspace::span(io::read_matrix(inputs[0]));
  const Subspace e2 = Subspace::span(io::read_matrix(inputs[1]));
  const Subspace r = common_complement(e1, e2);
  const io::Json j = {{"complement", io::subspace_to_json(r)},
                      {"margin_first", complementarity_margin(e1, r)},
                      {"margin_second", complementarity_margin(e2, r)}};
  if (!out.empty()) io::write_json(out, j);
  print_json(j);
  return kExitOk;
}

int run_counterexample() {
  const Subspace estar = Subspace::from_orthonormal(Matrix::Identity(2, 1));
  const Subspace r = orthogonal_complement(estar);
  Matrix tilted(2, 1);
  tilted << 1.0, 1.0;
  const GraphOperator alpha = graph_operator(Subspace::span(tilted), estar, r);
  const PathSegment seg = affine_sign_reversal_path(estar, r, alpha);
  const Matrix mid = seg.evaluate(0.5);
  const Subspace mid_range = column_space(mid);
  io::Json j = {{"p0", io::matrix_to_json(seg.evaluate(0.0))},
                {"p_half", io::matrix_to_json(mid)},
                {"p1", io::matrix_to_json(seg.evaluate(1.0))},
                {"range_at_half", io::subspace_to_json(mid_range)},
                {"complement_margin_at_half", complementarity_margin(mid_range, r)},
                {"range_at_half_equals_kernel_complement",
                 max_principal_angle(mid_range, r) <= kIntersectionAngle}};
  OperatorPath path(2, 2);
  path.append(seg);
  const PathCertificate cert = certify(path, StratumSpec::rank_stratum(1, 2, 2));
  j["certificate"] = {{"verdict", cert.passed ? "pass" : "fail"},
                      {"first_failure", cert.first_failure}};
  print_json(j);
  return kExitOk;
}

std::pair<Index, Index> parse_dims(const std::string& text) {
  const auto comma = text.find(',');
  try {
    if (comma != std::string::npos) {
      std::size_t u1 = 0, u2 = 0;
      const std::string a = text.substr(0, comma), b = text.substr(comma + 1);
      const long long rows = std::stoll(a, &u1);
      const long long cols = std::stoll(b, &u2);
      if (u1 == a.size() && u2 == b.size() && rows > 0 && cols > 0) return {rows, cols};
    }
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::ParseError, "--dims must be rows,cols with positive integers");
}

std::uint64_t effective_seed(std::uint64_t flag_seed) {
  const char* env = std::getenv("STRATUM_PATH_SEED");
  if (env == nullptr || *env == '\0') return flag_seed;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (*end != '\0') throw Error(ErrorCode::ParseError, "STRATUM_PATH_SEED is not an integer");
  return v;
}

int run_gen(const std::string& dims, Index k, std::uint64_t seed, const std::string& out) {
  const auto [rows, cols] = parse_dims(dims);
  const Matrix t = random_stratum_point(rows, cols, k, effective_seed(seed));
  io::write_matrix(out, t);
  std::cout << "wrote " << rows << "x" << cols << " rank-" << k << " matrix to " << out << '\n';
  return kExitOk;
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"Paths and certificates inside fixed-rank and Fredholm matrix strata", "opstrata"};
  app.require_subcommand(1);
  double tol = kDefaultTol;

  std::vector<std::string> inputs;
  std::string stratum, out, path_file, report, in, dims;
  int samples = 100;
  Index m = 0, n = 0, k = 0;
  std::uint64_t seed = 0;

  auto* connect = app.add_subcommand("connect", "build a path between two operators");
  connect->add_option("--in", inputs, "operator files (two)")->required();
  connect->add_option("--stratum", stratum, "rank:k or fredholm:m,n")->required();
  connect->add_option("--out", out, "output path file")->required();
  connect->add_option("--tol", tol, "relative singular-value threshold");

  auto* cert = app.add_subcommand("certify", "certify a path file");
  cert->add_option("--path", path_file, "path file")->required();
  cert->add_option("--stratum", stratum, "rank:k or fredholm:m,n")->required();
  cert->add_option("--samples", samples, "intervals per segment");
  cert->add_option("--report", report, "certificate output file");
  cert->add_option("--tol", tol, "relative singular-value threshold");

  auto* tangent = app.add_subcommand("tangent-dim", "tangent-space dimension at an operator");
  tangent->add_option("--in", in, "operator file")->required();
  tangent->add_option("--tol", tol, "relative singular-value threshold");

  auto* sdim = app.add_subcommand("stratum-dim", "dimension of the rank-k stratum of m x n");
  sdim->add_option("m", m)->required();
  sdim->add_option("n", n)->required();
  sdim->add_option("k", k)->required();

  auto* stratify = app.add_subcommand("stratify", "certified stratification of m x n matrices");
  stratify->add_option("m", m)->required()->check(CLI::PositiveNumber);
  stratify->add_option("n", n)->required()->check(CLI::PositiveNumber);
  stratify->add_option("--seed", seed, "sampling seed");

  auto* complement = app.add_subcommand("common-complement",
                                        "subspace complementary to two column spans");
  complement->add_option("--in", inputs, "column-span files (two)")->required();
  complement->add_option("--out", out, "output file");

  auto* counter = app.add_subcommand("counterexample-thm22",
                                     "evaluate the affine sign-reversal path on the 2x2 instance");

  auto* gen = app.add_subcommand("gen", "seeded random rank-k matrix");
  gen->add_option("--dims", dims, "rows,cols")->required();
  gen->add_option("--rank", k, "rank")->required();
  gen->add_option("--seed", seed, "seed (STRATUM_PATH_SEED overrides)");
  gen->add_option("--out", out, "output matrix file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*connect) return run_connect(inputs, stratum, out, tol);
    if (*cert) return run_certify(path_file, stratum, samples, report, tol);
    if (*tangent) return run_tangent_dim(in, tol);
    if (*sdim) {
      std::cout << stratum_dim(m, n, k) << '\n';
      return kExitOk;
    }
    if (*stratify) return run_stratify(m, n, effective_seed(seed));
    if (*complement) return run_common_complement(inputs, out);
    if (*counter) return run_counterexample();
    if (*gen) return run_gen(dims, k, seed, out);
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitInvalid;
}

}  // namespace opstrata
