#pragma once

#include "charfact/charfun.hpp"
#include "charfact/rowcon.hpp"

namespace charfact {

// ---------------------------------------------------------------------------
// Julia-Halmos matrix of a contraction l: mapping
// codomain(l) (+) [defect of l] -> domain(l) (+) [defect of l*], with blocks
//   [[ l*,            D_l |defect      ],
//    [ D_{l*}|defect, -l restricted    ]]
// written in defect coordinates through range isometries. Square by
// construction (the two defect ranks differ by cols - rows) and unitary.
// ---------------------------------------------------------------------------
struct JuliaHalmos {
  ComplexMatrix l;       // the contraction itself
  ComplexMatrix matrix;  // (cols(l) + defect_star_dim) x (rows(l) + defect_dim)
  Eigen::Index defect_dim = 0;       // rank of (I - l*l)^{1/2}
  Eigen::Index defect_star_dim = 0;  // rank of (I - ll*)^{1/2}
  double unitarity = 0.0;            // max of ||J*J - I||, ||JJ* - I||
};

JuliaHalmos julia_halmos(const ComplexMatrix& l,
                         const RankTolerance& tol = default_rank_tolerance());

// ---------------------------------------------------------------------------
// The two defect unitaries attached to an upper-triangular pair:
//   sigma:      defect coords of T  -> coords of (defect of A) (+) (defect of L)
//   sigma_star: defect coords of T* -> coords of (defect of B*) (+) (defect of L*)
// built by solving the defining block identities on the range of the defect
// operators via pseudoinverse, then certified: the identity residuals and
// unitarity defects are reported, not assumed.
// ---------------------------------------------------------------------------
struct DefectUnitaries {
  ComplexMatrix sigma;
  ComplexMatrix sigma_star;
  Eigen::Index dim_a = 0;       // rank of the right defect of A
  Eigen::Index dim_l = 0;       // rank of the defect of the coupling
  Eigen::Index dim_b_star = 0;  // rank of the left defect of B
  Eigen::Index dim_l_star = 0;  // rank of the star defect of the coupling
  double sigma_unitarity = 0.0;
  double sigma_star_unitarity = 0.0;
  double sigma_identity = 0.0;       // residual of sigma D_T = [[D_A, -A* L D_B],[0, D_L D_B]]
  double sigma_star_identity = 0.0;  // residual of sigma_* D_T* = [[-B L* D_A*, D_B*],[D_L* D_A*, 0]]
};

DefectUnitaries defect_unitaries(
    const UpperTriangularPair& pair,
    const RankTolerance& tol = default_rank_tolerance());

// Right-hand side of the triangular factorization on the truncation:
//   (I (x) sigma_*^{-1}) diag(Theta_B, I) (I (x) J_L) diag(Theta_A, I) (I (x) sigma),
// assembled as a truncated multi-analytic operator from defect coords of T
// to defect coords of T*.
TruncatedMultiAnalytic factorization_rhs(
    const UpperTriangularPair& pair, int k,
    const RankTolerance& tol = default_rank_tolerance());

struct FactorizationCertificate {
  ComplexMatrix lhs;  // char_fun(assemble_T(pair), k).assembled
  ComplexMatrix rhs;  // factorization_rhs(pair, k).assembled
  double residual = 0.0;
  double sigma_unitarity = 0.0;
  double sigma_star_unitarity = 0.0;
  double jl_unitarity = 0.0;
  int k = 0;
  double tolerance = 0.0;
  bool pass = false;
};

FactorizationCertificate verify_factorization(
    const UpperTriangularPair& pair, int k, double tolerance = 1e-8,
    const RankTolerance& tol = default_rank_tolerance());

// ---------------------------------------------------------------------------
// Converse direction: from a unitary w and diagonal tuples back to a
// triangular row contraction whose characteristic function coincides with
// the w-coupled product.
// ---------------------------------------------------------------------------

// The four blocks of w* for a unitary
// w : (left defect of A) (+) F -> (right defect of B) (+) F_*:
//   w* = [[l, m], [n, k]],  l : (right defect of B) -> (left defect of A).
struct WStarBlocks {
  ComplexMatrix l, m, n, k;
};

WStarBlocks decompose_w(const ComplexMatrix& w, Eigen::Index d_a_star,
                        Eigen::Index d_b);

struct ConverseResult {
  RowOperator t;           // assembled [[A, X],[0, B]] with X built from l
  ComplexMatrix coupling;  // l in defect coordinates
  ComplexMatrix u;         // F -> defect coords of the coupling
  ComplexMatrix v;         // F_* -> star-defect coords of the coupling
  double u_unitarity = 0.0;
  double v_unitarity = 0.0;
  double k1_residual = 0.0;  // || v k* u* + (compressed l) ||
  double coincidence = 0.0;  // operator-norm residual of the two dilations
  Eigen::Index f_prime_dim = 0;       // 0 on success
  Eigen::Index f_star_prime_dim = 0;  // 0 on success
};

ConverseResult converse_build(const RowOperator& a, const RowOperator& b,
                              const ComplexMatrix& w, Eigen::Index f_dim,
                              Eigen::Index f_star_dim, int k,
                              const RankTolerance& tol =
                                  default_rank_tolerance());

// || (I (x) w_star) m.assembled - m_prime.assembled (I (x) w) ||: the
// coincidence residual of two multi-analytic operators intertwined by
// constant unitaries.
double verify_coincidence(const TruncatedMultiAnalytic& m,
                          const TruncatedMultiAnalytic& m_prime,
                          const ComplexMatrix& w, const ComplexMatrix& w_star);

}  // namespace charfact
