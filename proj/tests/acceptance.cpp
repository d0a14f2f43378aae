// Acceptance gate: runs the full default verification battery once and
// prints exactly one PASS/FAIL line per criterion, with the measured value
// and its pinned tolerance. Exit code = number of failed criteria.
//
// Usage: acceptance <path-to-charfact-binary>
// The binary path is needed for the certificate-determinism criterion.

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "charfact/charfun.hpp"
#include "charfact/errors.hpp"
#include "charfact/rowcon.hpp"
#include "charfact/suites.hpp"

using namespace charfact;

namespace {

const SuiteReport* find_suite(const std::vector<SuiteReport>& reports,
                              const std::string& name) {
  for (const SuiteReport& r : reports) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

const ResidualLine* find_line(const SuiteReport* report,
                              const std::string& name) {
  if (report == nullptr) return nullptr;
  for (const ResidualLine& line : report->lines) {
    if (line.name == name) return &line;
  }
  return nullptr;
}

bool line_ok(const SuiteReport* report, const std::string& name) {
  const ResidualLine* line = find_line(report, name);
  return line != nullptr && line->pass();
}

double line_worst(const SuiteReport* report, const std::string& name) {
  const ResidualLine* line = find_line(report, name);
  return line == nullptr ? std::nan("") : line->worst;
}

int run_cmd(const std::string& cmd) {
  const int rc = std::system(cmd.c_str());
  if (rc == -1) return -1;
  if (WIFEXITED(rc)) return WEXITSTATUS(rc);
  return -2;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

int failures = 0;

void verdict(int index, const std::string& what, bool ok,
             const std::string& detail) {
  if (!ok) ++failures;
  std::printf("criterion %2d  %-44s %s  (%s)\n", index, what.c_str(),
              ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* pattern, double a, double b = 0.0,
                double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), pattern, a, b, c);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: acceptance <charfact-binary>\n");
    return 1;
  }
  const std::string cli = std::string("\"") + argv[1] + "\"";

  SuiteOptions options;  // defaults: seed 42, count 50, max 3x3, k 4
  const std::vector<SuiteReport> reports = run_all_suites(options);
  const SuiteReport* fact = find_suite(reports, "factorization");
  const SuiteReport* jl = find_suite(reports, "julia_halmos");
  const SuiteReport* trunc = find_suite(reports, "truncation");
  const SuiteReport* conv = find_suite(reports, "converse");
  const SuiteReport* cons = find_suite(reports, "constrained");

  // 1: 50 seeded triangular instances factorize within 1e-8 in under 60 s.
  {
    const bool ok = fact != nullptr && fact->instances == 50 &&
                    fact->failing_seeds.empty() &&
                    line_ok(fact, "factorization_residual") &&
                    fact->headline_seconds <= 60.0;
    verdict(1, "triangular factorization, 50 instances", ok,
            fmt("worst residual %.3e <= 1e-8, verification time %.1f s <= 60",
                line_worst(fact, "factorization_residual"),
                fact ? fact->headline_seconds : -1.0));
  }

  // 2: defect rotations unitary within 1e-10, block identities within 1e-9.
  {
    const bool ok = line_ok(fact, "sigma_unitarity") &&
                    line_ok(fact, "sigma_star_unitarity") &&
                    line_ok(fact, "sigma_identity") &&
                    line_ok(fact, "sigma_star_identity");
    verdict(2, "defect rotation unitarity and identities", ok,
            fmt("unitarity %.3e <= 1e-10, identities %.3e <= 1e-9",
                std::max(line_worst(fact, "sigma_unitarity"),
                         line_worst(fact, "sigma_star_unitarity")),
                std::max(line_worst(fact, "sigma_identity"),
                         line_worst(fact, "sigma_star_identity"))));
  }

  // 3: both closed-form identities of the symbol within 1e-10.
  {
    const bool ok = line_ok(fact, "lemma_defect_identity") &&
                    line_ok(fact, "lemma_resolvent_identity");
    verdict(3, "defect and resolvent identities", ok,
            fmt("worst %.3e <= 1e-10",
                std::max(line_worst(fact, "lemma_defect_identity"),
                         line_worst(fact, "lemma_resolvent_identity"))));
  }

  // 4: rotation matrices of 100 contractions unitary (norm-one relaxed).
  {
    const bool ok = jl != nullptr && jl->instances == 100 &&
                    jl->failing_seeds.empty() && line_ok(jl, "unitarity") &&
                    line_ok(jl, "norm_one_unitarity");
    verdict(4, "contraction rotations, 100 instances", ok,
            fmt("strict %.3e <= 1e-10, norm-one %.3e <= 1e-6",
                line_worst(jl, "unitarity"),
                line_worst(jl, "norm_one_unitarity")));
  }

  // 5: scalar coefficients match the closed form.
  {
    std::vector<ComplexMatrix> blocks;
    blocks.push_back(0.5 * ComplexMatrix::Identity(1, 1));
    const TruncatedMultiAnalytic theta =
        char_fun(make_row_operator(std::move(blocks)), 8);
    const double vacuum_err =
        std::abs(symbol_coefficient(theta, Word{})(0, 0) + 0.5);
    double worst = 0.0;
    for (int m = 1; m <= 8; ++m) {
      const Word word(std::vector<int>(static_cast<std::size_t>(m), 1));
      const double expected = 0.75 * std::pow(0.5, m - 1);
      worst = std::max(worst,
                       std::abs(symbol_coefficient(theta, word)(0, 0) -
                                expected));
    }
    const bool ok = vacuum_err <= 1e-16 && worst <= 1e-12;
    verdict(5, "scalar tuple closed-form coefficients", ok,
            fmt("vacuum error %.3e <= 1e-16, series error %.3e <= 1e-12",
                vacuum_err, worst));
  }

  // 6: low-order coefficients stable under deeper truncation.
  {
    const bool ok = trunc != nullptr && trunc->instances == 20 &&
                    trunc->failing_seeds.empty() &&
                    line_ok(trunc, "coefficient_stability");
    verdict(6, "truncation stability, 20 instances", ok,
            fmt("worst drift %.3e <= 1e-12",
                line_worst(trunc, "coefficient_stability")));
  }

  // 7: converse construction coincides; padded control rejected.
  {
    const bool ok = conv != nullptr && conv->instances == 20 &&
                    conv->failing_seeds.empty() &&
                    line_ok(conv, "coincidence") &&
                    line_ok(conv, "corner_block_identity") &&
                    line_ok(conv, "pure_contractivity_violations") &&
                    line_ok(conv, "pure_contractivity_control");
    verdict(7, "converse construction, 20 instances", ok,
            fmt("coincidence %.3e <= 1e-8, corner identity %.3e <= 1e-9, "
                "control rejected: %.0f",
                line_worst(conv, "coincidence"),
                line_worst(conv, "corner_block_identity"),
                line_ok(conv, "pure_contractivity_control") ? 1.0 : 0.0));
  }

  // 8: commuting tuples: pointwise factorization, series agreement,
  //    invariance; noncommuting control rejected.
  {
    const bool ok = cons != nullptr && cons->instances == 20 &&
                    cons->failing_seeds.empty() &&
                    line_ok(cons, "pointwise_factorization") &&
                    line_ok(cons, "series_vs_point") &&
                    line_ok(cons, "invariance") &&
                    line_ok(cons, "noncommuting_control");
    verdict(8, "commuting tuples, 20 instances", ok,
            fmt("pointwise %.3e <= 1e-8, series %.3e <= 2^-4+1e-10, "
                "invariance %.3e <= 1e-10",
                line_worst(cons, "pointwise_factorization"),
                line_worst(cons, "series_vs_point"),
                line_worst(cons, "invariance")));
  }

  // 9: every computed function is a contraction with strictly contractive
  //    vacuum coefficient, across all suites.
  {
    double worst_norm = 0.0;
    double worst_vacuum = 0.0;
    int norm_lines = 0;
    int vacuum_lines = 0;
    bool ok = true;
    for (const SuiteReport& r : reports) {
      for (const ResidualLine& line : r.lines) {
        if (line.name.find("char_fun_norm") != std::string::npos) {
          ++norm_lines;
          worst_norm = std::max(worst_norm, line.worst);
          ok = ok && line.pass();
        }
        if (line.name.find("vacuum_sigma_max") != std::string::npos) {
          ++vacuum_lines;
          worst_vacuum = std::max(worst_vacuum, line.worst);
          ok = ok && line.pass();
        }
      }
    }
    ok = ok && norm_lines >= 4 && vacuum_lines >= 4;
    verdict(9, "contractivity across all suites", ok,
            fmt("worst norm %.12f <= 1+1e-10, worst vacuum sigma %.6f < 1",
                worst_norm, worst_vacuum));
  }

  // 10: coupling extraction and coefficient round trips; byte-identical
  //     certificates across reruns.
  {
    bool deterministic = false;
    char tmpl[] = "/tmp/charfact_acc_XXXXXX";
    if (mkdtemp(tmpl) != nullptr) {
      const std::string dir = tmpl;
      const std::string inst = dir + "/pair.json";
      write_file(inst,
                 R"({"n":1,"spaces":{"h1":1,"h2":1},"A":[[[[0.0,0.0]]]],)"
                 R"("B":[[[[0.0,0.0]]]],"L":[[[0.5,0.0]]]})");
      const std::string quiet = " > /dev/null 2> /dev/null";
      const std::string self =
          " selftest --count 3 --max-n 2 --max-dim 2 --trunc 3 --out ";
      const int r1 = run_cmd(cli + self + dir + "/s1.json" + quiet);
      const int r2 = run_cmd(cli + self + dir + "/s2.json" + quiet);
      const int r3 = run_cmd(cli + " factorize " + inst + " --out " + dir +
                             "/f1.json" + quiet);
      const int r4 = run_cmd(cli + " factorize " + inst + " --out " + dir +
                             "/f2.json" + quiet);
      const std::string s1 = read_file(dir + "/s1.json");
      const std::string f1 = read_file(dir + "/f1.json");
      deterministic = r1 == 0 && r2 == 0 && r3 == 0 && r4 == 0 &&
                      !s1.empty() && s1 == read_file(dir + "/s2.json") &&
                      !f1.empty() && f1 == read_file(dir + "/f2.json");
    }
    const bool ok = fact != nullptr && fact->instances == 50 &&
                    line_ok(fact, "coupling_extraction") &&
                    line_ok(fact, "coefficient_round_trip") && deterministic;
    verdict(10, "round trips and certificate determinism", ok,
            fmt("extraction %.3e <= 1e-8, round trip %.3e <= 1e-12, "
                "reruns byte-identical: %.0f",
                line_worst(fact, "coupling_extraction"),
                line_worst(fact, "coefficient_round_trip"),
                deterministic ? 1.0 : 0.0));
  }

  std::printf("acceptance: %d of 10 criteria passed\n", 10 - failures);
  return failures;
}
