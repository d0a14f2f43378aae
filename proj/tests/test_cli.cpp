// End-to-end tests for the command-line tool. Run as:
//   cli_tests <path-to-charfact-binary>
// Exercises exit codes, JSON certificates, determinism, and the
// CHARFACT_RANK_TOL environment override through real subprocesses.

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace {

int checks = 0;
int failures = 0;

void check(bool ok, const std::string& what) {
  ++checks;
  if (!ok) {
    ++failures;
    std::printf("FAIL %s\n", what.c_str());
  } else {
    std::printf("ok   %s\n", what.c_str());
  }
}

int run(const std::string& cmd) {
  const int rc = std::system(cmd.c_str());
  if (rc == -1) return -1;
  if (WIFEXITED(rc)) return WEXITSTATUS(rc);
  return -2;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

std::string q(const std::string& s) { return "\"" + s + "\""; }

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: cli_tests <charfact-binary>\n");
    return 1;
  }
  const std::string cli = q(argv[1]);

  char tmpl[] = "/tmp/charfact_cli_XXXXXX";
  if (mkdtemp(tmpl) == nullptr) {
    std::fprintf(stderr, "mkdtemp failed\n");
    return 1;
  }
  const std::string dir = tmpl;
  const std::string out_txt = dir + "/stdout.txt";
  const std::string err_txt = dir + "/stderr.txt";
  auto redirect = [&](const std::string& cmd) {
    return cmd + " > " + q(out_txt) + " 2> " + q(err_txt);
  };

  // ---- instances -----------------------------------------------------------
  const std::string coisometry = dir + "/coisometry.json";
  write_file(coisometry,
             R"({"n":2,"spaces":{"h":1},"T":[[[[0.6,0.0]]],[[[0.8,0.0]]]]})");
  const std::string too_big = dir + "/too_big.json";
  write_file(too_big,
             R"({"n":2,"spaces":{"h":1},"T":[[[[0.8,0.0]]],[[[0.8,0.0]]]]})");
  const std::string malformed = dir + "/malformed.json";
  write_file(malformed, "{ this is not json");
  const std::string blaschke = dir + "/blaschke.json";
  write_file(blaschke, R"({"n":1,"spaces":{"h":1},"T":[[[[0.5,0.0]]]]})");
  const std::string zero_tuple = dir + "/zero.json";
  write_file(zero_tuple, R"({"n":1,"spaces":{"h":1},"T":[[[[0.0,0.0]]]]})");
  const std::string scalar_pair = dir + "/scalar_pair.json";
  write_file(scalar_pair,
             R"({"n":1,"spaces":{"h1":1,"h2":1},"A":[[[[0.0,0.0]]]],)"
             R"("B":[[[[0.0,0.0]]]],"L":[[[0.5,0.0]]]})");
  const std::string corrupted_pair = dir + "/corrupted_pair.json";
  write_file(corrupted_pair,
             R"({"n":1,"spaces":{"h1":1,"h2":1},"A":[[[[0.0,0.0]]]],)"
             R"("B":[[[[0.0,0.0]]]],"L":[[[0.25,0.0]]],)"
             R"("T":[[[[0.0,0.0],[0.5,0.0]],[[0.0,0.0],[0.0,0.0]]]]})");
  const std::string converse_ok = dir + "/converse.json";
  write_file(converse_ok,
             R"({"n":1,"spaces":{"h1":1,"h2":1},"A":[[[[0.0,0.0]]]],)"
             R"("B":[[[[0.0,0.0]]]],)"
             R"("w":[[[0.0,0.0],[1.0,0.0]],[[1.0,0.0],[0.0,0.0]]]})");
  const std::string converse_padded = dir + "/converse_padded.json";
  write_file(converse_padded,
             R"({"n":1,"spaces":{"h1":1,"h2":1},"A":[[[[0.0,0.0]]]],)"
             R"("B":[[[[0.0,0.0]]]],)"
             R"("w":[[[0.0,0.0],[1.0,0.0],[0.0,0.0]],)"
             R"([[1.0,0.0],[0.0,0.0],[0.0,0.0]],)"
             R"([[0.0,0.0],[0.0,0.0],[1.0,0.0]]]})");
  const std::string commuting_pair = dir + "/commuting_pair.json";
  write_file(commuting_pair,
             R"({"n":1,"spaces":{"h1":1,"h2":1},"A":[[[[0.3,0.0]]]],)"
             R"("B":[[[[0.4,0.0]]]],"L":[[[0.2,0.0]]]})");
  const std::string noncommuting = dir + "/noncommuting.json";
  write_file(
      noncommuting,
      R"({"n":2,"spaces":{"h":2},)"
      R"("T":[[[[0.0,0.0],[0.5,0.0]],[[0.0,0.0],[0.0,0.0]]],)"
      R"([[[0.0,0.0],[0.0,0.0]],[[0.5,0.0],[0.0,0.0]]]]})");
  const std::string ragged = dir + "/ragged.json";
  write_file(ragged,
             R"({"n":1,"spaces":{"h":2},)"
             R"("T":[[[[0.1,0.0],[0.2,0.0]],[[0.3,0.0]]]]})");

  // ---- check ---------------------------------------------------------------
  check(run(redirect(cli + " check " + q(coisometry))) == 0,
        "check accepts a coisometric tuple");
  check(contains(read_file(out_txt), "row contraction: yes"),
        "check reports the contraction verdict");
  check(run(redirect(cli + " check " + q(too_big))) == 1,
        "check rejects a tuple with row norm above one");
  check(run(redirect(cli + " check " + q(malformed))) == 2,
        "check exits 2 on malformed JSON");
  check(run(redirect(cli + " check " + q(dir + "/missing.json"))) == 2,
        "check exits 2 on a missing file");
  check(run(redirect(cli + " check " + q(ragged))) == 2,
        "check exits 2 on ragged matrix rows");

  // ---- charfun -------------------------------------------------------------
  const std::string cert1 = dir + "/cert_blaschke.json";
  check(run(redirect(cli + " charfun " + q(blaschke) + " --trunc 4 --out " +
                     q(cert1))) == 0,
        "charfun succeeds on a scalar tuple");
  {
    nlohmann::json j = nlohmann::json::parse(read_file(cert1));
    check(j["theorem"] == "3.1", "charfun certificate carries its tag");
    check(j["pass"] == true, "charfun certificate passes");
    check(j["k"] == 4, "charfun certificate records the truncation");
    auto coeff = [&](const std::string& word) {
      return j["coefficients"][word][0][0][0].get<double>();
    };
    check(std::abs(coeff("") + 0.5) < 1e-15, "vacuum coefficient is -a");
    check(std::abs(coeff("1") - 0.75) < 1e-12, "first coefficient is 1-a^2");
    check(std::abs(coeff("11") - 0.375) < 1e-12, "second coefficient");
    check(std::abs(coeff("111") - 0.1875) < 1e-12, "third coefficient");
    check(std::abs(coeff("1111") - 0.09375) < 1e-12, "fourth coefficient");
    check(j["coefficients"].size() == 5, "exactly k+1 words for one letter");
  }
  const std::string cert2 = dir + "/cert_zero.json";
  check(run(redirect(cli + " charfun " + q(zero_tuple) + " --trunc 3 --out " +
                     q(cert2))) == 0,
        "charfun succeeds on the zero tuple");
  {
    nlohmann::json j = nlohmann::json::parse(read_file(cert2));
    auto coeff = [&](const std::string& word) {
      return j["coefficients"][word][0][0][0].get<double>();
    };
    check(coeff("") == 0.0, "zero tuple: vacuum coefficient vanishes");
    check(std::abs(coeff("1") - 1.0) < 1e-15, "zero tuple: shift coefficient");
    check(coeff("11") == 0.0 && coeff("111") == 0.0,
          "zero tuple: higher coefficients vanish");
  }
  const std::string cert3 = dir + "/cert_coiso.json";
  check(run(redirect(cli + " charfun " + q(coisometry) + " --out " +
                     q(cert3))) == 0,
        "charfun succeeds on a coisometry");
  {
    nlohmann::json j = nlohmann::json::parse(read_file(cert3));
    check(j["coefficients"].is_object() && j["coefficients"].empty(),
          "coisometry yields an empty coefficient set");
  }
  check(contains(read_file(out_txt), "trivial defect"),
        "coisometry is reported as a trivial defect");

  // ---- factorize -----------------------------------------------------------
  const std::string cert4 = dir + "/cert_factorize.json";
  check(run(redirect(cli + " factorize " + q(scalar_pair) + " --out " +
                     q(cert4))) == 0,
        "factorize accepts the scalar pair");
  {
    nlohmann::json j = nlohmann::json::parse(read_file(cert4));
    check(j["theorem"] == "3.2", "factorize certificate carries its tag");
    check(j["residuals"]["factorization_residual"].get<double>() <= 1e-12,
          "scalar pair factorizes to machine precision");
    check(j["pass"] == true, "factorize certificate passes");
  }
  check(run(redirect(cli + " factorize " + q(corrupted_pair))) == 1,
        "factorize rejects a corrupted coupling");
  check(run(redirect(cli + " factorize " + q(blaschke))) == 2,
        "factorize exits 2 without a split pair");

  // ---- converse ------------------------------------------------------------
  const std::string cert5 = dir + "/cert_converse.json";
  check(run(redirect(cli + " converse " + q(converse_ok) + " --out " +
                     q(cert5))) == 0,
        "converse accepts a planar rotation");
  {
    nlohmann::json j = nlohmann::json::parse(read_file(cert5));
    check(j["theorem"] == "3.3", "converse certificate carries its tag");
    check(j["residuals"]["coincidence"].get<double>() <= 1e-8,
          "converse coincidence is tight");
    check(j["residuals"]["surviving_fibre_dim"] == 0.0,
          "no surviving fibre for a generic rotation");
  }
  check(run(redirect(cli + " converse " + q(converse_padded))) == 1,
        "converse rejects padded slack directions");
  check(contains(read_file(err_txt), "surviving fibre dimensions"),
        "converse failure names the surviving dimensions");

  // ---- constrained ---------------------------------------------------------
  check(run(redirect(cli + " constrained " + q(blaschke))) == 0,
        "constrained accepts a single-space commuting tuple");
  check(contains(read_file(out_txt), "pointwise factorization skipped"),
        "constrained notes the missing split pair");
  const std::string cert6 = dir + "/cert_constrained.json";
  check(run(redirect(cli + " constrained " + q(commuting_pair) +
                     " --grid 6 --out " + q(cert6))) == 0,
        "constrained accepts a commuting split pair");
  {
    nlohmann::json j = nlohmann::json::parse(read_file(cert6));
    check(j["theorem"] == "4.x", "constrained certificate carries its tag");
    check(j["residuals"]["pointwise_factorization"].get<double>() <= 1e-8,
          "pointwise factorization holds on the grid");
    check(j["residuals"]["invariance"].get<double>() <= 1e-10,
          "symmetric subspace invariance holds");
  }
  check(contains(read_file(out_txt), "6 sample points"),
        "constrained reports the grid size");
  check(run(redirect(cli + " constrained " + q(noncommuting))) == 1,
        "constrained rejects a noncommuting tuple");
  check(contains(read_file(err_txt), "commutator norm"),
        "noncommuting failure reports the commutator norm");

  // ---- explicit sample points ---------------------------------------------
  const std::string points = dir + "/points.json";
  write_file(points, R"([[[0.1,0.0]],[[0.0,0.2]],[[-0.3,0.1]]])");
  check(run(redirect(cli + " constrained " + q(commuting_pair) +
                     " --points " + q(points))) == 0,
        "constrained accepts an explicit point file");
  check(contains(read_file(out_txt), "3 sample points"),
        "explicit point count is reported");

  // ---- selftest ------------------------------------------------------------
  const std::string self1 = dir + "/self1.json";
  const std::string self2 = dir + "/self2.json";
  const std::string base =
      cli + " selftest --count 2 --max-n 2 --max-dim 2 --trunc 3";
  check(run(redirect(base + " --out " + q(self1))) == 0,
        "selftest passes on a small battery");
  check(contains(read_file(out_txt), "overall: PASS"),
        "selftest prints the overall verdict");
  check(contains(read_file(out_txt), "failing seeds: none"),
        "selftest lists no failing seeds");
  check(run(redirect(base + " --out " + q(self2))) == 0,
        "selftest rerun exits cleanly");
  const std::string bytes1 = read_file(self1);
  check(!bytes1.empty() && bytes1 == read_file(self2),
        "selftest certificates are byte-identical across reruns");
  {
    nlohmann::json j = nlohmann::json::parse(bytes1);
    check(j["pass"] == true, "selftest battery passes");
    check(j["certificates"].is_array() && j["certificates"].size() >= 5,
          "selftest emits one certificate per result group");
    std::string prev;
    bool sorted = true;
    for (const auto& cert : j["certificates"]) {
      const std::string tag = cert["theorem"].get<std::string>();
      if (tag < prev) sorted = false;
      prev = tag;
    }
    check(sorted, "selftest certificates are sorted by tag");
  }
  check(run(redirect(cli + " selftest --count 0")) == 0,
        "selftest with an empty battery exits cleanly");
  check(contains(read_file(out_txt), "nothing run"),
        "selftest warns when nothing ran");

  const std::string seeds = dir + "/seeds.txt";
  write_file(seeds, "[9, 7, 9]");
  check(run(redirect(cli + " selftest --seeds " + q(seeds) +
                     " --max-n 2 --max-dim 2 --trunc 3")) == 0,
        "selftest accepts an explicit seed list");
  check(contains(read_file(out_txt), "2 instances"),
        "explicit seeds are deduplicated");

  // ---- environment override ------------------------------------------------
  check(run(redirect("CHARFACT_RANK_TOL=abc " + cli + " check " +
                     q(blaschke))) == 2,
        "invalid rank tolerance in the environment exits 2");
  check(run(redirect("CHARFACT_RANK_TOL=1e-9 " + cli + " check " +
                     q(blaschke))) == 0,
        "valid rank tolerance in the environment is accepted");

  std::printf("cli tests: %d checks, %d failures\n", checks, failures);
  return failures > 0 ? 1 : 0;
}
