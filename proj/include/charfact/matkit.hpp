#pragma once

#include <Eigen/Dense>
#include <complex>

#include "charfact/errors.hpp"

namespace charfact {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// Relative singular-value cutoff shared by every rank decision in the
// toolkit. Singular values <= relative_cutoff * sigma_max count as zero;
// the zero matrix has rank 0. Degenerate (zero-dimensional) matrices are
// legal inputs everywhere and produce zero-dimensional results.
struct RankTolerance {
  double relative_cutoff = 1e-10;
};

// Default cutoff, overridable through the CHARFACT_RANK_TOL environment
// variable (a positive real; anything else raises ParseError).
RankTolerance default_rank_tolerance();

// Largest singular value; 0 for empty matrices.
double operator_norm(const ComplexMatrix& m);

Eigen::Index numerical_rank(const ComplexMatrix& m,
                            const RankTolerance& tol = default_rank_tolerance());

// Unique PSD square root of a Hermitian PSD matrix. Eigenvalues in the band
// [-10*eps*sigma_max, 0) are clamped to zero (defect Gram matrices of
// near-coisometries land there); anything below the band raises NotPSD.
ComplexMatrix psd_sqrt(const ComplexMatrix& m);

// Orthonormal basis of the numerical column space, rank decided by `tol`.
// Column phases are pinned: the largest-magnitude entry of each column is
// made real and positive, so runs are reproducible.
ComplexMatrix range_isometry(const ComplexMatrix& m,
                             const RankTolerance& tol = default_rank_tolerance());

// Moore-Penrose pseudoinverse with singular values below the cutoff dropped.
ComplexMatrix pinv(const ComplexMatrix& m,
                   const RankTolerance& tol = default_rank_tolerance());

// Defect data of a single contraction L: domain-side defect
// (I - L*L)^{1/2}, codomain-side defect (I - LL*)^{1/2}, and isometries onto
// their ranges. Both rank decisions are taken from ONE SVD of L (the defect
// singular values sqrt(1 - s_i^2) share the s_i, padded with 1 on the wider
// side, under one common scale), which keeps
// rank_right - rank_left == cols - rows exactly even when some s_i sit on the
// unit boundary. That identity is what makes the Julia-Halmos matrix square.
struct ContractionDefects {
  ComplexMatrix d_right;  // (I - L*L)^{1/2}, cols x cols
  ComplexMatrix d_left;   // (I - LL*)^{1/2}, rows x rows
  ComplexMatrix v_right;  // isometry onto ran d_right, cols x rank_right
  ComplexMatrix v_left;   // isometry onto ran d_left, rows x rank_left
  Eigen::Index rank_right = 0;
  Eigen::Index rank_left = 0;
};

ContractionDefects contraction_defects(
    const ComplexMatrix& l, const RankTolerance& tol = default_rank_tolerance());

}  // namespace charfact
