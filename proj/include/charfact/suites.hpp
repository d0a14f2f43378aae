#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "charfact/matkit.hpp"

namespace charfact {

// ---------------------------------------------------------------------------
// Seeded verification suites. Each suite draws deterministic random
// instances, checks every certified identity on them, and reports the worst
// residual per named check together with the seeds of failing instances.
// Instance i uses seed `seed + i`, so a reported seed replays one instance.
// ---------------------------------------------------------------------------
struct SuiteOptions {
  std::uint64_t seed = 42;
  int count = 50;           // instances in the factorization suite
  int max_n = 3;            // tuple lengths drawn from {1, ..., max_n}
  Eigen::Index max_dim = 3; // space dimensions drawn from {1, ..., max_dim}
  int k = 4;                // truncation order
  double strictness = 0.9;  // row norm of generated tuples
  double tolerance = 1e-8;  // headline factorization tolerance
  // When non-empty the suites replay exactly these seeds (sorted) instead of
  // seed, seed+1, ..., seed+count-1.
  std::vector<std::uint64_t> explicit_seeds;
  RankTolerance rank_tol = default_rank_tolerance();
};

// One named check: worst observed value vs. its tolerance. `strict` marks
// checks that need `worst < tolerance` rather than `<=`.
struct ResidualLine {
  std::string name;
  std::string theorem;  // certificate tag this check belongs to
  double worst = 0.0;
  double tolerance = 0.0;
  bool strict = false;
  bool pass() const {
    return strict ? worst < tolerance : worst <= tolerance;
  }
};

struct SuiteReport {
  std::string name;
  int instances = 0;
  std::vector<ResidualLine> lines;
  // Headline residual of each instance, in seed order (histogram fodder).
  std::vector<double> instance_residuals;
  std::vector<std::uint64_t> failing_seeds;  // sorted, unique
  bool pass = true;
  double seconds = 0.0;           // whole suite, generation included
  double headline_seconds = 0.0;  // time inside the headline verification
};

// Factorization of the characteristic function of [[A, X],[0, B]] through
// the coupling: headline residual plus defect-unitary identities, lemma
// identities, contractivity, and both round trips. `count` instances.
SuiteReport run_factorization_suite(const SuiteOptions& options);

// Unitarity of the rotation attached to a contraction, 2*count instances up
// to 4x4 including rank-deficient and norm-one cases (the norm-one cases at
// a relaxed tolerance).
SuiteReport run_julia_halmos_suite(const SuiteOptions& options);

// Stability of low-order coefficients under deeper truncation (k = 3 vs 6),
// min(count, 20) instances.
SuiteReport run_truncation_suite(const SuiteOptions& options);

// Reconstruction of a pair from a unitary defect coupling: coincidence of
// the two multi-analytic operators, corner-block identity, certified
// unitaries, plus one negative control that must be rejected.
// min(count, 20) instances.
SuiteReport run_converse_suite(const SuiteOptions& options);

// Commuting tuples: pointwise factorization on ball samples, series vs.
// point evaluation, symmetric-subspace invariance, plus one noncommuting
// negative control. min(count, 20) instances.
SuiteReport run_constrained_suite(const SuiteOptions& options);

// All five suites in fixed order.
std::vector<SuiteReport> run_all_suites(const SuiteOptions& options);

}  // namespace charfact
