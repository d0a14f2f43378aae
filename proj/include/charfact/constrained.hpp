#pragma once

#include <vector>

#include "charfact/charfun.hpp"
#include "charfact/factorize.hpp"
#include "charfact/fock.hpp"
#include "charfact/random.hpp"
#include "charfact/rowcon.hpp"

namespace charfact {

// ---------------------------------------------------------------------------
// Symmetric compression: the subspace of the truncated Fock space spanned by
// the normalized symmetrizations of the basis words, one column per
// multidegree (m_1, ..., m_n) with sum <= k.
// ---------------------------------------------------------------------------
struct SymmetricBasis {
  int n = 1;
  int k = 0;
  ComplexMatrix sym_isometry;  // dim(Gamma_{<=k}) x (number of multidegrees)
  std::vector<std::vector<int>> multidegrees;  // column -> multidegree
};

SymmetricBasis symmetric_basis(int n, int k);

// A point of the open unit ball of C^n.
struct BallPoint {
  ComplexVector z;
};

// Pointwise characteristic function of a commuting tuple at z:
//   -T + D_{T*} (I - sum_i z_i T_i^*)^{-1} Z D_T,  Z = (z_1 I, ..., z_n I),
// compressed to defect coordinates.
ComplexMatrix theta_point(const RowOperator& t, const BallPoint& z,
                          const RankTolerance& tol = default_rank_tolerance());

// || theta_point(t, z) - sum_{|alpha| <= k} z^alpha theta_alpha ||. Requires
// sum_i |z_i| <= 1/2 so the dropped tail is bounded by 2^{-k}.
double series_vs_point(const RowOperator& t, const BallPoint& z, int k,
                       const RankTolerance& tol = default_rank_tolerance());

// (sym (x) I)* char_fun(t, k).assembled (sym (x) I): the characteristic
// function compressed to the symmetric subspace.
ComplexMatrix constrained_char_fun(const RowOperator& t, int k,
                                   const RankTolerance& tol =
                                       default_rank_tolerance());

// Norm of the part of char_fun(t,k).assembled* that maps the symmetric
// subspace (tensor defect coords) outside of itself. Zero up to roundoff:
// adjoints of right creations send symmetrized vectors to symmetrized
// vectors, so the co-invariance holds for every operator assembled from
// word coefficients, and this check certifies that the assembled matrix
// really has that structure. Commutativity itself is guarded by the
// precondition (NotCommuting), not by this residual;
// check_commuting=false skips the precondition so the structural residual
// can still be measured on arbitrary tuples.
double verify_invariance(const RowOperator& t, int k,
                         bool check_commuting = true,
                         const RankTolerance& tol = default_rank_tolerance());

struct ConstrainedCertificate {
  std::vector<BallPoint> points;
  std::vector<double> residuals;  // one per point
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

// Pointwise factorization check on sample points z:
//   theta_T(z) = sigma_*^{-1} diag(theta_B(z), I) J_L diag(theta_A(z), I) sigma.
ConstrainedCertificate verify_constrained_factorization(
    const UpperTriangularPair& pair, const std::vector<BallPoint>& points,
    double tolerance = 1e-8,
    const RankTolerance& tol = default_rank_tolerance());

// Deterministic sample schedules (no RNG): a Weyl-sequence grid of radii and
// phases. series points keep sum_i |z_i| <= 0.45; ball points sweep radii up
// to ||z||_2 = 0.95.
std::vector<BallPoint> series_sample_points(int n, int count);
std::vector<BallPoint> ball_sample_points(int n, int count);

// Commuting tuples as polynomials in one random matrix, rescaled so the row
// norm equals `strictness` exactly.
RowOperator random_commuting_row_contraction(std::uint64_t seed, int n,
                                             Eigen::Index dim,
                                             double strictness = 0.9);
RowOperator random_commuting_row_contraction(Rng& rng, int n,
                                             Eigen::Index dim,
                                             double strictness = 0.9);

// A commuting upper-triangular pair: polynomials in one block-upper-
// triangular matrix give commuting T_j = [[A_j, X_j], [0, B_j]]; the
// coupling is recovered from the corner blocks.
UpperTriangularPair random_commuting_pair(std::uint64_t seed, int n,
                                          Eigen::Index dim1,
                                          Eigen::Index dim2,
                                          double strictness = 0.9);
UpperTriangularPair random_commuting_pair(Rng& rng, int n, Eigen::Index dim1,
                                          Eigen::Index dim2,
                                          double strictness = 0.9);

}  // namespace charfact
