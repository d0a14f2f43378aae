#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "charfact/charfun.hpp"
#include "charfact/constrained.hpp"
#include "charfact/errors.hpp"
#include "charfact/factorize.hpp"
#include "charfact/io.hpp"
#include "charfact/rowcon.hpp"
#include "charfact/suites.hpp"

namespace {

using namespace charfact;

// ---------------------------------------------------------------------------
// Shared helpers
// ---------------------------------------------------------------------------

RowOperator tuple_from_instance(const Instance& inst,
                                const RankTolerance& tol) {
  if (inst.t) return *inst.t;
  if (inst.split && inst.a && inst.b) {
    if (!inst.l) {
      throw ParseError(
          "instance needs 'L' to assemble a tuple from 'A' and 'B'");
    }
    UpperTriangularPair pair{*inst.a, *inst.b, *inst.l};
    return assemble_T(pair, tol);
  }
  throw ParseError("instance must provide 'T' or a split pair 'A', 'B', 'L'");
}

void put(Certificate& cert, const std::string& name, double value,
         double tolerance) {
  cert.residuals[name] = value;
  cert.tolerances[name] = tolerance;
}

// The wire invariant: pass holds exactly when every residual is at most its
// tolerance (non-finite residuals fail).
void recompute_pass(Certificate& cert) {
  cert.pass = true;
  for (const auto& [name, value] : cert.residuals) {
    const auto it = cert.tolerances.find(name);
    const double tolerance = it == cert.tolerances.end() ? 0.0 : it->second;
    cert.pass = cert.pass && std::isfinite(value) && value <= tolerance;
  }
}

void print_certificate_text(const Certificate& cert) {
  std::printf("certificate %s\n", cert.theorem.c_str());
  std::printf("  k: %d\n", cert.k);
  std::printf("  seed: %llu\n",
              static_cast<unsigned long long>(cert.seed));
  std::printf("  residuals:\n");
  for (const auto& [name, value] : cert.residuals) {
    const auto it = cert.tolerances.find(name);
    const double tolerance = it == cert.tolerances.end() ? 0.0 : it->second;
    const bool ok = std::isfinite(value) && value <= tolerance;
    std::printf("    %-34s %13.6e  (tolerance %9.3e)  %s\n", name.c_str(),
                value, tolerance, ok ? "ok" : "FAIL");
  }
  std::printf("  pass: %s\n", cert.pass ? "yes" : "no");
}

// Writes --out and prints either the canonical JSON or the text rendering.
void emit_certificate(const Certificate& cert, const std::string& out_path,
                      const std::string& format) {
  const std::string text = certificate_to_json(cert);
  if (!out_path.empty()) write_text_file(out_path, text);
  if (format == "json") {
    std::printf("%s\n", text.c_str());
  } else {
    print_certificate_text(cert);
  }
}

std::string format_complex(const Complex& z) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%.6g%+.6gi", z.real(), z.imag());
  return buf;
}

void print_matrix(const ComplexMatrix& m, const char* indent) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    std::string line = indent;
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c > 0) line += "  ";
      line += format_complex(m(r, c));
    }
    std::printf("%s\n", line.c_str());
  }
}

// ---------------------------------------------------------------------------
// check: row-contraction report
// ---------------------------------------------------------------------------

int cmd_check(const std::string& file, const std::string& format) {
  const RankTolerance tol = default_rank_tolerance();
  const Instance inst = parse_instance_file(file);
  const RowOperator t = tuple_from_instance(inst, tol);
  const double norm = operator_norm(t.row());
  const bool contraction = is_row_contraction(t);
  const double commutator = max_commutator_norm(t);
  const bool commuting = is_commuting(t);
  Eigen::Index rank_domain = 0;
  Eigen::Index rank_range = 0;
  if (contraction) {
    const DefectData dd = defects(t, tol);
    rank_domain = dd.rank_right;
    rank_range = dd.rank_left;
  }

  if (format == "json") {
    std::string out = "{\"commuting\":";
    out += commuting ? "true" : "false";
    if (contraction) {
      out += ",\"defect_rank_domain\":" + std::to_string(rank_domain);
      out += ",\"defect_rank_range\":" + std::to_string(rank_range);
    } else {
      out += ",\"defect_rank_domain\":null,\"defect_rank_range\":null";
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", commutator);
    out += ",\"max_commutator_norm\":";
    out += buf;
    out += ",\"n\":" + std::to_string(inst.n);
    out += ",\"row_contraction\":";
    out += contraction ? "true" : "false";
    std::snprintf(buf, sizeof(buf), "%.17g", norm);
    out += ",\"row_norm\":";
    out += buf;
    out += ",\"space_dimension\":" + std::to_string(t.dim_out) + "}";
    std::printf("%s\n", out.c_str());
  } else {
    std::printf("tuple length n: %d\n", inst.n);
    std::printf("space dimension: %lld\n",
                static_cast<long long>(t.dim_out));
    std::printf("row norm: %.17g\n", norm);
    std::printf("commuting: %s (max commutator norm %.6e)\n",
                commuting ? "yes" : "no", commutator);
    if (contraction) {
      std::printf("defect rank (domain side): %lld\n",
                  static_cast<long long>(rank_domain));
      std::printf("defect rank (range side): %lld\n",
                  static_cast<long long>(rank_range));
    }
    std::printf("row contraction: %s\n", contraction ? "yes" : "no");
  }
  if (!contraction) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", norm);
    throw NotAContraction("row norm " + std::string(buf) + " exceeds 1");
  }
  return 0;
}

// ---------------------------------------------------------------------------
// charfun: coefficients and the two defining identities
// ---------------------------------------------------------------------------

int cmd_charfun(const std::string& file, int k, const std::string& out_path,
                const std::string& format) {
  const RankTolerance tol = default_rank_tolerance();
  const Instance inst = parse_instance_file(file);
  CharFunInput input;
  input.t = tuple_from_instance(inst, tol);
  input.defect = defects(input.t, tol);
  input.k = k;
  const TruncatedMultiAnalytic theta = char_fun(input);
  const LemmaResiduals lemma = verify_lemma_identities(input);
  const double norm = operator_norm(theta.assembled);

  Certificate cert;
  cert.theorem = "3.1";
  cert.k = k;
  put(cert, "defect_identity", lemma.defect_identity, 1e-10);
  put(cert, "resolvent_identity", lemma.resolvent_identity, 1e-10);
  put(cert, "multi_analytic", is_multi_analytic(theta), 1e-10);
  put(cert, "contractivity_excess", std::max(0.0, norm - 1.0), 1e-10);
  put(cert, "pure_contractivity_violation",
      is_purely_contractive(theta) ? 0.0 : 1.0, 0.5);
  recompute_pass(cert);

  cert.include_coefficients = true;
  const bool trivial = theta.dom_dim == 0 || theta.cod_dim == 0;
  if (!trivial) {
    for (const auto& [word, coeff] : theta.coeffs) {
      cert.coefficients[word.to_string()] = coeff;
    }
  }
  emit_certificate(cert, out_path, format);
  if (format != "json") {
    if (trivial) {
      std::printf("note: trivial defect (dimensions %lld -> %lld), empty "
                  "coefficient set\n",
                  static_cast<long long>(theta.dom_dim),
                  static_cast<long long>(theta.cod_dim));
    } else {
      std::printf("coefficients (%zu words, |word| <= %d):\n",
                  theta.coeffs.size(), k);
      for (const auto& [word, coeff] : theta.coeffs) {
        std::printf("  theta[\"%s\"]:\n", word.to_string().c_str());
        print_matrix(coeff, "    ");
      }
    }
  }
  return cert.pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// factorize: five-factor product against the assembled tuple
// ---------------------------------------------------------------------------

int cmd_factorize(const std::string& file, int k, double tolerance,
                  const std::string& out_path, const std::string& format) {
  const RankTolerance tol = default_rank_tolerance();
  const Instance inst = parse_instance_file(file);
  if (!inst.split || !inst.a || !inst.b) {
    throw ParseError("factorize needs a split instance with 'A' and 'B'");
  }
  if (!inst.l) {
    throw ParseError("factorize needs the coupling 'L'");
  }
  const UpperTriangularPair pair{*inst.a, *inst.b, *inst.l};
  const DefectUnitaries du = defect_unitaries(pair, tol);

  double residual = 0.0;
  double rotation_unitarity = 0.0;
  if (inst.t) {
    // Cross-check the explicit tuple against the pair's factorization. The
    // defect frames only agree when the tuple matches the assembled pair, so
    // a corrupted coupling shows up as a large residual.
    const TruncatedMultiAnalytic lhs = char_fun(*inst.t, k, tol);
    const TruncatedMultiAnalytic rhs = factorization_rhs(pair, k, tol);
    if (lhs.assembled.rows() != rhs.assembled.rows() ||
        lhs.assembled.cols() != rhs.assembled.cols()) {
      throw NotFactorable(
          "defect dimensions of the explicit tuple do not match the pair");
    }
    residual = operator_norm(lhs.assembled - rhs.assembled);
    rotation_unitarity = julia_halmos(pair.coupling, tol).unitarity;
  } else {
    const FactorizationCertificate fc =
        verify_factorization(pair, k, tolerance, tol);
    residual = fc.residual;
    rotation_unitarity = fc.jl_unitarity;
  }

  Certificate cert;
  cert.theorem = "3.2";
  cert.k = k;
  put(cert, "factorization_residual", residual, tolerance);
  put(cert, "sigma_unitarity", du.sigma_unitarity, 1e-10);
  put(cert, "sigma_star_unitarity", du.sigma_star_unitarity, 1e-10);
  put(cert, "sigma_identity", du.sigma_identity, 1e-9);
  put(cert, "sigma_star_identity", du.sigma_star_identity, 1e-9);
  put(cert, "rotation_unitarity", rotation_unitarity, 1e-10);
  recompute_pass(cert);
  emit_certificate(cert, out_path, format);

  if (format != "json") {
    std::vector<std::string> zero_blocks;
    if (du.dim_a == 0) zero_blocks.push_back("first-tuple defect");
    if (du.dim_l == 0) zero_blocks.push_back("coupling defect");
    if (du.dim_b_star == 0) zero_blocks.push_back("second-tuple star defect");
    if (du.dim_l_star == 0) zero_blocks.push_back("coupling star defect");
    if (!zero_blocks.empty()) {
      std::string note = "note: zero-dimensional blocks:";
      for (const std::string& name : zero_blocks) note += " " + name + ",";
      note.pop_back();
      std::printf("%s\n", note.c_str());
    }
  }
  return cert.pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// converse: rebuild a pair from a unitary coupling of the defects
// ---------------------------------------------------------------------------

int cmd_converse(const std::string& file, int k, double tolerance,
                 const std::string& out_path, const std::string& format) {
  const RankTolerance tol = default_rank_tolerance();
  const Instance inst = parse_instance_file(file);
  if (!inst.split || !inst.a || !inst.b) {
    throw ParseError("converse needs a split instance with 'A' and 'B'");
  }
  if (!inst.w) {
    throw ParseError("converse needs the defect coupling 'w'");
  }
  const DefectData da = defects(*inst.a, tol);
  const DefectData db = defects(*inst.b, tol);
  const Eigen::Index f_dim = inst.w->cols() - da.rank_left;
  const Eigen::Index f_star_dim = inst.w->rows() - db.rank_right;
  if (f_dim < 0 || f_star_dim < 0) {
    throw DimensionMismatch(
        "'w' is smaller than the defect spaces it must couple");
  }
  const ConverseResult cr = converse_build(*inst.a, *inst.b, *inst.w, f_dim,
                                           f_star_dim, k, tol);

  Certificate cert;
  cert.theorem = "3.3";
  cert.k = k;
  put(cert, "coincidence", cr.coincidence, tolerance);
  put(cert, "corner_block_identity", cr.k1_residual, 1e-9);
  put(cert, "u_unitarity", cr.u_unitarity, 1e-10);
  put(cert, "v_unitarity", cr.v_unitarity, 1e-10);
  put(cert, "surviving_fibre_dim", static_cast<double>(cr.f_prime_dim), 0.0);
  put(cert, "surviving_star_fibre_dim",
      static_cast<double>(cr.f_star_prime_dim), 0.0);
  recompute_pass(cert);
  emit_certificate(cert, out_path, format);

  if (format != "json") {
    std::printf("fibre dimensions: %lld and %lld\n",
                static_cast<long long>(f_dim),
                static_cast<long long>(f_star_dim));
    std::printf("surviving slices: %lld and %lld\n",
                static_cast<long long>(cr.f_prime_dim),
                static_cast<long long>(cr.f_star_prime_dim));
  }
  return cert.pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// constrained: commuting tuples on ball samples
// ---------------------------------------------------------------------------

int cmd_constrained(const std::string& file, int k, double tolerance,
                    const std::string& points_file, int grid,
                    const std::string& out_path, const std::string& format) {
  const RankTolerance tol = default_rank_tolerance();
  const Instance inst = parse_instance_file(file);
  const RowOperator t = tuple_from_instance(inst, tol);

  Certificate cert;
  cert.theorem = "4.x";
  cert.k = k;

  bool have_pair = false;
  std::size_t point_count = 0;
  if (inst.split && inst.a && inst.b && inst.l) {
    have_pair = true;
    const UpperTriangularPair pair{*inst.a, *inst.b, *inst.l};
    std::vector<BallPoint> points;
    if (!points_file.empty()) {
      for (ComplexVector& z : parse_points_file(points_file, inst.n)) {
        points.push_back(BallPoint{std::move(z)});
      }
    } else {
      points = ball_sample_points(inst.n, grid);
    }
    point_count = points.size();
    const ConstrainedCertificate cc =
        verify_constrained_factorization(pair, points, tolerance, tol);
    put(cert, "pointwise_factorization", cc.max_residual, tolerance);
  }

  double series_worst = 0.0;
  for (const BallPoint& z : series_sample_points(inst.n, 5)) {
    series_worst = std::max(series_worst, series_vs_point(t, z, k, tol));
  }
  put(cert, "series_vs_point", series_worst, std::pow(2.0, -k) + 1e-10);
  put(cert, "invariance", verify_invariance(t, k, true, tol), 1e-10);
  recompute_pass(cert);
  emit_certificate(cert, out_path, format);

  if (format != "json") {
    if (have_pair) {
      std::printf("pointwise factorization checked on %zu sample points\n",
                  point_count);
    } else {
      std::printf(
          "note: no split pair in the instance, pointwise factorization "
          "skipped\n");
    }
  }
  return cert.pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// selftest: the full seeded suite battery
// ---------------------------------------------------------------------------

void print_histogram(const std::vector<double>& residuals) {
  int zeros = 0;
  int failed = 0;
  std::map<int, int> decades;
  for (double r : residuals) {
    if (!std::isfinite(r)) {
      ++failed;
    } else if (r == 0.0) {
      ++zeros;
    } else {
      ++decades[static_cast<int>(std::floor(std::log10(r)))];
    }
  }
  if (residuals.empty()) return;
  std::printf("  residual histogram:\n");
  if (zeros > 0) {
    std::printf("    %-20s %s %d\n", "exactly zero:",
                std::string(static_cast<std::size_t>(std::min(zeros, 50)), '#')
                    .c_str(),
                zeros);
  }
  for (const auto& [exponent, count] : decades) {
    char label[32];
    std::snprintf(label, sizeof(label), "[1e%+03d, 1e%+03d):", exponent,
                  exponent + 1);
    std::printf("    %-20s %s %d\n", label,
                std::string(static_cast<std::size_t>(std::min(count, 50)), '#')
                    .c_str(),
                count);
  }
  if (failed > 0) {
    std::printf("    %-20s %d\n", "failed instances:", failed);
  }
}

int cmd_selftest(const SuiteOptions& options, const std::string& out_path,
                 const std::string& format) {
  const std::vector<SuiteReport> reports = run_all_suites(options);

  // One certificate per theorem tag, assembled from every suite's lines.
  std::map<std::string, Certificate> by_tag;
  int total_instances = 0;
  bool all_pass = true;
  for (const SuiteReport& report : reports) {
    total_instances += report.instances;
    all_pass = all_pass && report.pass;
    for (const ResidualLine& line : report.lines) {
      Certificate& cert = by_tag[line.theorem];
      cert.theorem = line.theorem;
      cert.k = options.k;
      cert.seed = options.seed;
      put(cert, line.name, line.worst, line.tolerance);
    }
  }
  std::vector<Certificate> certs;
  certs.reserve(by_tag.size());
  for (auto& [tag, cert] : by_tag) {
    recompute_pass(cert);
    certs.push_back(cert);
  }
  const std::string json_text = certificates_to_json(certs);
  if (!out_path.empty()) write_text_file(out_path, json_text);

  if (format == "json") {
    std::printf("%s\n", json_text.c_str());
  } else {
    for (const SuiteReport& report : reports) {
      std::printf("suite %s: %d instances, %.2f s\n", report.name.c_str(),
                  report.instances, report.seconds);
      for (const ResidualLine& line : report.lines) {
        std::printf("  %-34s worst %13.6e  tolerance %9.3e  %s\n",
                    line.name.c_str(), line.worst, line.tolerance,
                    line.pass() ? "ok" : "FAIL");
      }
      print_histogram(report.instance_residuals);
      if (report.failing_seeds.empty()) {
        std::printf("  failing seeds: none\n");
      } else {
        std::string seeds = "  failing seeds:";
        for (std::uint64_t s : report.failing_seeds) {
          seeds += " " + std::to_string(s);
        }
        std::printf("%s\n", seeds.c_str());
      }
    }
    if (total_instances == 0) {
      std::printf("warning: nothing run (count = 0)\n");
    }
    std::printf("overall: %s\n", all_pass ? "PASS" : "FAIL");
  }
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    // The environment override is read once and cached; probing it here
    // turns a malformed CHARFACT_RANK_TOL into a regular input error instead
    // of an exception escaping from option defaults below.
    default_rank_tolerance();
  } catch (const ParseError& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return 2;
  }

  CLI::App app{
      "Truncated characteristic functions of row contractions: evaluation, "
      "factorization through a coupling, converse reconstruction, and "
      "commuting (ball) specializations. Instances and certificates are "
      "JSON; see the project README for the schemas."};
  app.require_subcommand(1);

  std::string file;
  int k = 4;
  double tolerance = 1e-8;
  std::string out_path;
  std::string format = "text";
  std::string points_file;
  int grid = 20;
  std::string seeds_file;
  SuiteOptions suite_options;

  const auto add_common = [&](CLI::App* cmd, bool with_file) {
    if (with_file) {
      cmd->add_option("file", file, "instance file (JSON)")->required();
    }
    cmd->add_option("--out", out_path, "write the certificate JSON here");
    cmd->add_option("--format", format, "stdout format")
        ->check(CLI::IsMember({"text", "json"}));
  };
  const auto add_trunc = [&](CLI::App* cmd) {
    cmd->add_option("--trunc", k, "truncation order k")
        ->check(CLI::Range(1, 12));
  };
  const auto add_tol = [&](CLI::App* cmd) {
    cmd->add_option("--tol", tolerance, "headline residual tolerance")
        ->check(CLI::PositiveNumber);
  };

  CLI::App* check = app.add_subcommand(
      "check", "report row norm, commutation, and defect ranks");
  add_common(check, true);

  CLI::App* charfun = app.add_subcommand(
      "charfun", "coefficients of the characteristic function plus its "
                 "defining identities");
  add_common(charfun, true);
  add_trunc(charfun);

  CLI::App* factorize = app.add_subcommand(
      "factorize",
      "verify the factorization of the characteristic function of "
      "[[A, X],[0, B]] through the coupling");
  add_common(factorize, true);
  add_trunc(factorize);
  add_tol(factorize);

  CLI::App* converse = app.add_subcommand(
      "converse",
      "rebuild a pair from a unitary defect coupling 'w' and verify the "
      "coincidence");
  add_common(converse, true);
  add_trunc(converse);
  add_tol(converse);

  CLI::App* constrained = app.add_subcommand(
      "constrained",
      "pointwise checks for commuting tuples on unit-ball samples");
  add_common(constrained, true);
  add_trunc(constrained);
  add_tol(constrained);
  constrained->add_option("--points", points_file,
                          "JSON file with sample points");
  constrained->add_option("--grid", grid,
                          "number of generated sample points")
      ->check(CLI::Range(1, 10000));

  CLI::App* selftest = app.add_subcommand(
      "selftest", "run every seeded verification suite");
  add_common(selftest, false);
  selftest->add_option("--seed", suite_options.seed, "base seed");
  selftest->add_option("--count", suite_options.count,
                       "instances in the factorization suite (others scale "
                       "from it)")
      ->check(CLI::Range(0, 100000));
  selftest->add_option("--max-n", suite_options.max_n,
                       "largest tuple length drawn")
      ->check(CLI::Range(1, 9));
  selftest->add_option("--max-dim", suite_options.max_dim,
                       "largest space dimension drawn")
      ->check(CLI::Range(1, 16));
  selftest->add_option("--trunc", suite_options.k, "truncation order k")
      ->check(CLI::Range(1, 12));
  selftest->add_option("--tol", suite_options.tolerance,
                       "headline residual tolerance")
      ->check(CLI::PositiveNumber);
  selftest->add_option("--seeds", seeds_file,
                       "JSON array of seeds to replay instead of the range");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (check->parsed()) {
      return cmd_check(file, format);
    }
    if (charfun->parsed()) {
      return cmd_charfun(file, k, out_path, format);
    }
    if (factorize->parsed()) {
      return cmd_factorize(file, k, tolerance, out_path, format);
    }
    if (converse->parsed()) {
      return cmd_converse(file, k, tolerance, out_path, format);
    }
    if (constrained->parsed()) {
      return cmd_constrained(file, k, tolerance, points_file, grid, out_path,
                             format);
    }
    if (selftest->parsed()) {
      if (!seeds_file.empty()) {
        suite_options.explicit_seeds = parse_seeds_file(seeds_file);
      }
      return cmd_selftest(suite_options, out_path, format);
    }
  } catch (const ParseError& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return 2;
  } catch (const NotCommuting& e) {
    std::fprintf(stderr, "error: %s (commutator norm %.6e)\n", e.what(),
                 e.commutator_norm);
    return 1;
  } catch (const NotPurelyContractive& e) {
    std::fprintf(stderr,
                 "error: %s (surviving fibre dimensions %ld and %ld)\n",
                 e.what(), e.f_prime_dim, e.f_star_prime_dim);
    return 1;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
