#pragma once

#include <map>
#include <utility>

#include "charfact/fock.hpp"
#include "charfact/rowcon.hpp"

namespace charfact {

// ---------------------------------------------------------------------------
// Tensor plumbing for Gamma (x) E with E a coefficient space.
//
// Ordering convention used everywhere: Fock index major, coefficient index
// minor — basis vector e_alpha (x) e_c sits at index(alpha) * dim(E) + c.
// ---------------------------------------------------------------------------

// kron(I_copies, b) * x and x * kron(I_copies, b) without forming the
// Kronecker factor.
ComplexMatrix block_diag_left(const ComplexMatrix& b, Eigen::Index copies,
                              const ComplexMatrix& x);
ComplexMatrix block_diag_right(const ComplexMatrix& x, Eigen::Index copies,
                               const ComplexMatrix& b);
ComplexMatrix kron_identity(Eigen::Index copies, const ComplexMatrix& b);

// kron(a, I_fibre): a acting on the Fock factor, identity on the fibre.
ComplexMatrix kron_fibre_identity(const ComplexMatrix& a, Eigen::Index fibre);

// Index map for the canonical isomorphism
// Gamma (x) (E1 (+) E2)  ~  (Gamma (x) E1) (+) (Gamma (x) E2):
// entry [mixed index] = split index.
std::vector<Eigen::Index> fock_split_indices(Eigen::Index fock_dim,
                                             Eigen::Index e1, Eigen::Index e2);

// Reorder the columns/rows of an operator between the two layouts above.
ComplexMatrix cols_mixed_to_split(const ComplexMatrix& m, Eigen::Index fock_dim,
                                  Eigen::Index e1, Eigen::Index e2);
ComplexMatrix cols_split_to_mixed(const ComplexMatrix& m, Eigen::Index fock_dim,
                                  Eigen::Index e1, Eigen::Index e2);
ComplexMatrix rows_split_to_mixed(const ComplexMatrix& m, Eigen::Index fock_dim,
                                  Eigen::Index e1, Eigen::Index e2);

// ---------------------------------------------------------------------------
// Truncated multi-analytic operators
// ---------------------------------------------------------------------------

// An operator Gamma_{<=k} (x) E  ->  Gamma_{<=k} (x) E_* of the form
// sum_alpha R_alpha (x) theta_alpha, carried both as its word-indexed
// coefficients and as the assembled matrix. The two representations
// round-trip exactly; the coefficient of alpha is read off the assembled
// matrix at output block reversed(alpha), input block of the empty word.
struct TruncatedMultiAnalytic {
  FockBasis basis;
  Eigen::Index dom_dim = 0;  // dim E
  Eigen::Index cod_dim = 0;  // dim E_*
  std::map<Word, ComplexMatrix> coeffs;
  ComplexMatrix assembled;
};

TruncatedMultiAnalytic from_coefficients(const FockBasis& basis,
                                         Eigen::Index dom_dim,
                                         Eigen::Index cod_dim,
                                         std::map<Word, ComplexMatrix> coeffs);
TruncatedMultiAnalytic from_assembled(const FockBasis& basis,
                                      Eigen::Index dom_dim,
                                      Eigen::Index cod_dim,
                                      ComplexMatrix assembled);

struct CharFunInput {
  RowOperator t;
  DefectData defect;
  int k = 4;
};

// Characteristic function of a row contraction on the truncated Fock space,
// compressed to the defect spaces:
//   -(I (x) T) + (I (x) D_{T*}) N R~ (I (x) D_T),  N = sum_{m<=k} (R~ T~*)^m.
// The creation row R~ raises Fock degree, so N inverts I - R~T~* exactly on
// the truncation and the r -> 1 limit is evaluated with no truncation error.
TruncatedMultiAnalytic char_fun(const CharFunInput& input);
TruncatedMultiAnalytic char_fun(const RowOperator& t, int k,
                                const RankTolerance& tol = default_rank_tolerance());

// Coefficient of a word, read off the assembled matrix. WordTooLong if
// |alpha| > k.
ComplexMatrix symbol_coefficient(const TruncatedMultiAnalytic& m,
                                 const Word& alpha);

// Largest residual of M (L_j (x) I) = (L_j (x) I) M over j, evaluated on
// inputs of Fock degree < k (the truncation boundary is excluded). Returns
// the residual itself; 0 exactly when M has multi-analytic block structure.
double is_multi_analytic(const TruncatedMultiAnalytic& m);

// True iff the vacuum coefficient has norm strictly below 1 - margin.
bool is_purely_contractive(const TruncatedMultiAnalytic& m,
                           double margin = 1e-10);

struct LemmaResiduals {
  double defect_identity = 0.0;    // Theta(R) D_T~ = D_{T~*} N (R~ - T~)
  double resolvent_identity = 0.0; // I + Theta(R) T~* = D_{T~*} N D_{T~*}
};

// Both identities evaluated at r = 1 on the truncation, as operator norms of
// the differences. Exact up to roundoff for any row contraction.
LemmaResiduals verify_lemma_identities(const CharFunInput& input);

}  // namespace charfact
