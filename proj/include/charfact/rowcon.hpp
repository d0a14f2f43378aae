#pragma once

#include <cstdint>
#include <vector>

#include "charfact/matkit.hpp"
#include "charfact/random.hpp"

namespace charfact {

// A tuple T = (T_1, ..., T_n) of equally-shaped blocks, viewed as the row
// matrix [T_1 ... T_n] mapping the n-fold direct sum of the input space into
// the output space. Tuples on a single space have dim_out == dim_in.
struct RowOperator {
  Eigen::Index dim_out = 0;
  Eigen::Index dim_in = 0;
  std::vector<ComplexMatrix> blocks;

  Eigen::Index n() const { return static_cast<Eigen::Index>(blocks.size()); }
  ComplexMatrix row() const;  // dim_out x (n * dim_in)
};

RowOperator make_row_operator(std::vector<ComplexMatrix> blocks);
RowOperator row_operator_from_row(const ComplexMatrix& row, Eigen::Index n);

// Row contraction test: largest eigenvalue of [T_1..T_n][T_1..T_n]* at most
// 1 + slack.
bool is_row_contraction(const RowOperator& t, double slack = 1e-10);

struct DefectData {
  ComplexMatrix d_right;  // (I - T*T)^{1/2} on the n-fold input sum
  ComplexMatrix d_left;   // (I - TT*)^{1/2} on the output space
  ComplexMatrix v_right;  // isometry onto ran d_right
  ComplexMatrix v_left;   // isometry onto ran d_left
  Eigen::Index rank_right = 0;
  Eigen::Index rank_left = 0;
};

DefectData defects(const RowOperator& t,
                   const RankTolerance& tol = default_rank_tolerance());

// The data of a 2x2 block-upper-triangular row contraction
// T_j = [[A_j, X_j], [0, B_j]]: the diagonal tuples plus the coupling
// contraction L written in defect coordinates, mapping the right defect
// space of B into the left defect space of A. ||L|| <= 1 + 1e-10.
struct UpperTriangularPair {
  RowOperator a;
  RowOperator b;
  ComplexMatrix coupling;  // rank_left(A) x rank_right(B)
};

// Builds T from the pair: X = D_{A*} (v_left_A L v_right_B*) D_B, sliced
// into per-index blocks. The result is always a row contraction; the check
// is run and a failure reported rather than assumed.
RowOperator assemble_T(const UpperTriangularPair& pair,
                       const RankTolerance& tol = default_rank_tolerance());

// Recovers the coupling contraction from the corner row X = [X_1 ... X_n].
// NotFactorable if X does not factor through the defect spaces (residual
// above 1e-8), NotContractive if the recovered L exceeds norm 1 + 1e-8.
ComplexMatrix extract_L(const RowOperator& a, const RowOperator& b,
                        const RowOperator& x,
                        const RankTolerance& tol = default_rank_tolerance());

// Seeded Gaussian tuple rescaled so the row norm is exactly `strictness`.
RowOperator random_row_contraction(std::uint64_t seed, int n, Eigen::Index dim,
                                   double strictness = 0.9);
RowOperator random_row_contraction(Rng& rng, int n, Eigen::Index dim,
                                   double strictness = 0.9);

bool is_commuting(const RowOperator& t, double tol = 1e-10);
double max_commutator_norm(const RowOperator& t);

// Index map realizing the shuffle between the two layouts of the same space:
// position j*(dim1+dim2)+r in the tuple-major sum of n copies of H1 (+) H2
// goes to position `map[...]` in (n copies of H1) (+) (n copies of H2).
std::vector<Eigen::Index> tuple_to_split_indices(Eigen::Index n,
                                                 Eigen::Index dim1,
                                                 Eigen::Index dim2);

// out.row(to[i]) = m.row(i) / out.col(to[i]) = m.col(i).
ComplexMatrix scatter_rows(const ComplexMatrix& m,
                           const std::vector<Eigen::Index>& to);
ComplexMatrix scatter_cols(const ComplexMatrix& m,
                           const std::vector<Eigen::Index>& to);

}  // namespace charfact
