#include "charfact/charfun.hpp"

#include <algorithm>
#include <cstddef>
#include <utility>

#include "charfact/errors.hpp"

namespace charfact {

ComplexMatrix block_diag_left(const ComplexMatrix& b, Eigen::Index copies,
                              const ComplexMatrix& x) {
  if (x.rows() != copies * b.cols()) {
    throw DimensionMismatch("block_diag_left: row count does not match");
  }
  ComplexMatrix out(copies * b.rows(), x.cols());
  for (Eigen::Index i = 0; i < copies; ++i) {
    out.middleRows(i * b.rows(), b.rows()).noalias() =
        b * x.middleRows(i * b.cols(), b.cols());
  }
  return out;
}

ComplexMatrix block_diag_right(const ComplexMatrix& x, Eigen::Index copies,
                               const ComplexMatrix& b) {
  if (x.cols() != copies * b.rows()) {
    throw DimensionMismatch("block_diag_right: column count does not match");
  }
  ComplexMatrix out(x.rows(), copies * b.cols());
  for (Eigen::Index i = 0; i < copies; ++i) {
    out.middleCols(i * b.cols(), b.cols()).noalias() =
        x.middleCols(i * b.rows(), b.rows()) * b;
  }
  return out;
}

ComplexMatrix kron_identity(Eigen::Index copies, const ComplexMatrix& b) {
  ComplexMatrix out =
      ComplexMatrix::Zero(copies * b.rows(), copies * b.cols());
  for (Eigen::Index i = 0; i < copies; ++i) {
    out.block(i * b.rows(), i * b.cols(), b.rows(), b.cols()) = b;
  }
  return out;
}

ComplexMatrix kron_fibre_identity(const ComplexMatrix& a, Eigen::Index fibre) {
  ComplexMatrix out =
      ComplexMatrix::Zero(a.rows() * fibre, a.cols() * fibre);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      for (Eigen::Index c = 0; c < fibre; ++c) {
        out(i * fibre + c, j * fibre + c) = a(i, j);
      }
    }
  }
  return out;
}

std::vector<Eigen::Index> fock_split_indices(Eigen::Index fock_dim,
                                             Eigen::Index e1,
                                             Eigen::Index e2) {
  std::vector<Eigen::Index> map(
      static_cast<std::size_t>(fock_dim * (e1 + e2)));
  for (Eigen::Index f = 0; f < fock_dim; ++f) {
    for (Eigen::Index r = 0; r < e1 + e2; ++r) {
      const Eigen::Index mixed = f * (e1 + e2) + r;
      map[static_cast<std::size_t>(mixed)] =
          r < e1 ? f * e1 + r : fock_dim * e1 + f * e2 + (r - e1);
    }
  }
  return map;
}

ComplexMatrix cols_mixed_to_split(const ComplexMatrix& m, Eigen::Index fock_dim,
                                  Eigen::Index e1, Eigen::Index e2) {
  if (m.cols() != fock_dim * (e1 + e2)) {
    throw DimensionMismatch("cols_mixed_to_split: column count mismatch");
  }
  const auto map = fock_split_indices(fock_dim, e1, e2);
  ComplexMatrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.cols(); ++i) {
    out.col(map[static_cast<std::size_t>(i)]) = m.col(i);
  }
  return out;
}

ComplexMatrix cols_split_to_mixed(const ComplexMatrix& m, Eigen::Index fock_dim,
                                  Eigen::Index e1, Eigen::Index e2) {
  if (m.cols() != fock_dim * (e1 + e2)) {
    throw DimensionMismatch("cols_split_to_mixed: column count mismatch");
  }
  const auto map = fock_split_indices(fock_dim, e1, e2);
  ComplexMatrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.cols(); ++i) {
    out.col(i) = m.col(map[static_cast<std::size_t>(i)]);
  }
  return out;
}

ComplexMatrix rows_split_to_mixed(const ComplexMatrix& m, Eigen::Index fock_dim,
                                  Eigen::Index e1, Eigen::Index e2) {
  if (m.rows() != fock_dim * (e1 + e2)) {
    throw DimensionMismatch("rows_split_to_mixed: row count mismatch");
  }
  const auto map = fock_split_indices(fock_dim, e1, e2);
  ComplexMatrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out.row(i) = m.row(map[static_cast<std::size_t>(i)]);
  }
  return out;
}

namespace {

std::vector<ComplexMatrix> adjoint_blocks(const RowOperator& t) {
  std::vector<ComplexMatrix> out;
  out.reserve(t.blocks.size());
  for (const auto& block : t.blocks) {
    out.push_back(block.adjoint());
  }
  return out;
}

// Applies sum_j R_j (x) T_j^* to a matrix whose row blocks carry
// Gamma (x) H: the output block of word alpha*j is T_j^* times the input
// block of word alpha. Raises Fock degree by one, so it is nilpotent.
ComplexMatrix raise_step(const FockBasis& basis,
                         const std::vector<ComplexMatrix>& t_adj,
                         Eigen::Index d, const ComplexMatrix& x) {
  ComplexMatrix out = ComplexMatrix::Zero(x.rows(), x.cols());
  for (Eigen::Index w = 0; w < basis.dim(); ++w) {
    Word beta = basis.word_at(w);
    if (beta.empty()) {
      continue;
    }
    const int j = beta.letters.back();
    beta.letters.pop_back();
    const Eigen::Index prefix = basis.index_of(beta);
    out.middleRows(w * d, d).noalias() =
        t_adj[static_cast<std::size_t>(j - 1)] * x.middleRows(prefix * d, d);
  }
  return out;
}

// N x = sum_{m=0..k} (sum_j R_j (x) T_j^*)^m x: the Neumann series of
// (I - R~T~*)^{-1}, which terminates exactly on the truncated space.
ComplexMatrix neumann_apply(const FockBasis& basis,
                            const std::vector<ComplexMatrix>& t_adj,
                            Eigen::Index d, const ComplexMatrix& x) {
  ComplexMatrix out = x;
  ComplexMatrix acc = x;
  for (int m = 0; m < basis.truncation(); ++m) {
    acc = raise_step(basis, t_adj, d, acc);
    out += acc;
  }
  return out;
}

// R~ (I (x) y) for y with n*d rows, without forming either Kronecker factor:
// the block at output word alpha*j, input word alpha is rows [j d, (j+1) d)
// of y. With y = I this is the creation row R~ itself.
ComplexMatrix creation_row_shuffled(const FockBasis& basis, Eigen::Index d,
                                    const ComplexMatrix& y) {
  const Eigen::Index fdim = basis.dim();
  const Eigen::Index cols = y.cols();
  ComplexMatrix out = ComplexMatrix::Zero(fdim * d, fdim * cols);
  for (Eigen::Index w = 0; w < fdim; ++w) {
    Word beta = basis.word_at(w);
    if (beta.empty()) {
      continue;
    }
    const int j = beta.letters.back();
    beta.letters.pop_back();
    const Eigen::Index prefix = basis.index_of(beta);
    out.block(w * d, prefix * cols, d, cols) =
        y.middleRows((j - 1) * d, d);
  }
  return out;
}

// -(I (x) T) + (I (x) D_{T*}) N R~ (I (x) D_T) on the ambient spaces
// Gamma (x) (n-fold sum of H) -> Gamma (x) H.
ComplexMatrix ambient_char_fun(const FockBasis& basis, const RowOperator& t,
                               const DefectData& dd,
                               const std::vector<ComplexMatrix>& t_adj) {
  const Eigen::Index d = t.dim_out;
  const Eigen::Index n = t.n();
  const Eigen::Index fdim = basis.dim();
  const ComplexMatrix nrd = neumann_apply(
      basis, t_adj, d, creation_row_shuffled(basis, d, dd.d_right));
  ComplexMatrix amb = block_diag_left(dd.d_left, fdim, nrd);
  const ComplexMatrix row = t.row();
  for (Eigen::Index i = 0; i < fdim; ++i) {
    amb.block(i * d, i * n * d, d, n * d) -= row;
  }
  return amb;
}

void check_tuple_and_defects(const RowOperator& t, const DefectData& dd) {
  if (t.dim_out != t.dim_in) {
    throw DimensionMismatch(
        "characteristic function needs a tuple acting on a single space");
  }
  const Eigen::Index d = t.dim_out;
  const Eigen::Index n = t.n();
  if (dd.d_right.rows() != n * d || dd.d_right.cols() != n * d ||
      dd.d_left.rows() != d || dd.d_left.cols() != d ||
      dd.v_right.rows() != n * d || dd.v_left.rows() != d ||
      dd.v_right.cols() != dd.rank_right || dd.v_left.cols() != dd.rank_left) {
    throw DimensionMismatch("defect data does not match the tuple");
  }
}

}  // namespace

TruncatedMultiAnalytic from_coefficients(const FockBasis& basis,
                                         Eigen::Index dom_dim,
                                         Eigen::Index cod_dim,
                                         std::map<Word, ComplexMatrix> coeffs) {
  const Eigen::Index fdim = basis.dim();
  ComplexMatrix assembled =
      ComplexMatrix::Zero(fdim * cod_dim, fdim * dom_dim);
  for (const auto& [alpha, theta] : coeffs) {
    if (theta.rows() != cod_dim || theta.cols() != dom_dim) {
      throw DimensionMismatch(
          "coefficient of word '" + alpha.to_string() +
          "' does not have the declared codomain x domain shape");
    }
    if (alpha.length() > basis.truncation()) {
      throw WordTooLong("coefficient word '" + alpha.to_string() +
                        "' exceeds the truncation order");
    }
    const Word rev = alpha.reversed();
    const int room = basis.truncation() - alpha.length();
    const Eigen::Index limit = room == basis.truncation()
                                   ? fdim
                                   : basis.degree_offset(room + 1);
    for (Eigen::Index b = 0; b < limit; ++b) {
      Word out_word = basis.word_at(b);
      out_word.letters.insert(out_word.letters.end(), rev.letters.begin(),
                              rev.letters.end());
      const Eigen::Index ow = basis.index_of(out_word);
      assembled.block(ow * cod_dim, b * dom_dim, cod_dim, dom_dim) += theta;
    }
  }
  TruncatedMultiAnalytic out;
  out.basis = basis;
  out.dom_dim = dom_dim;
  out.cod_dim = cod_dim;
  out.coeffs = std::move(coeffs);
  out.assembled = std::move(assembled);
  return out;
}

TruncatedMultiAnalytic from_assembled(const FockBasis& basis,
                                      Eigen::Index dom_dim,
                                      Eigen::Index cod_dim,
                                      ComplexMatrix assembled) {
  const Eigen::Index fdim = basis.dim();
  if (assembled.rows() != fdim * cod_dim ||
      assembled.cols() != fdim * dom_dim) {
    throw DimensionMismatch(
        "assembled matrix does not match the basis and fibre dimensions");
  }
  TruncatedMultiAnalytic out;
  out.basis = basis;
  out.dom_dim = dom_dim;
  out.cod_dim = cod_dim;
  out.assembled = std::move(assembled);
  for (Eigen::Index w = 0; w < fdim; ++w) {
    out.coeffs.emplace(
        basis.word_at(w).reversed(),
        out.assembled.block(w * cod_dim, 0, cod_dim, dom_dim));
  }
  return out;
}

TruncatedMultiAnalytic char_fun(const CharFunInput& input) {
  check_tuple_and_defects(input.t, input.defect);
  if (input.k < 1) {
    throw ParseError("truncation order must be at least 1");
  }
  FockBasis basis(static_cast<int>(input.t.n()), input.k);
  const Eigen::Index fdim = basis.dim();
  const DefectData& dd = input.defect;
  const auto t_adj = adjoint_blocks(input.t);

  const ComplexMatrix amb = ambient_char_fun(basis, input.t, dd, t_adj);
  ComplexMatrix compressed = block_diag_left(
      dd.v_left.adjoint(), fdim, block_diag_right(amb, fdim, dd.v_right));

  TruncatedMultiAnalytic out;
  out.basis = basis;
  out.dom_dim = dd.rank_right;
  out.cod_dim = dd.rank_left;
  out.assembled = std::move(compressed);
  for (Eigen::Index w = 0; w < fdim; ++w) {
    out.coeffs.emplace(
        basis.word_at(w).reversed(),
        out.assembled.block(w * out.cod_dim, 0, out.cod_dim, out.dom_dim));
  }
  return out;
}

TruncatedMultiAnalytic char_fun(const RowOperator& t, int k,
                                const RankTolerance& tol) {
  CharFunInput input;
  input.t = t;
  input.defect = defects(t, tol);
  input.k = k;
  return char_fun(input);
}

ComplexMatrix symbol_coefficient(const TruncatedMultiAnalytic& m,
                                 const Word& alpha) {
  if (alpha.length() > m.basis.truncation()) {
    throw WordTooLong("word '" + alpha.to_string() +
                      "' exceeds the truncation order");
  }
  const Eigen::Index w = m.basis.index_of(alpha.reversed());
  return m.assembled.block(w * m.cod_dim, 0, m.cod_dim, m.dom_dim);
}

double is_multi_analytic(const TruncatedMultiAnalytic& m) {
  const FockBasis& basis = m.basis;
  const Eigen::Index fdim = basis.dim();
  const Eigen::Index dom = m.dom_dim;
  const Eigen::Index cod = m.cod_dim;
  if (dom == 0 || cod == 0 || fdim == 0) {
    return 0.0;
  }
  // Words of length < k; prepending a letter to anything longer leaves the
  // truncated space. Inputs on the truncation boundary are excluded from the
  // comparison.
  const Eigen::Index limit = basis.degree_offset(basis.truncation());
  double worst = 0.0;
  for (int j = 1; j <= basis.alphabet(); ++j) {
    ComplexMatrix c = ComplexMatrix::Zero(fdim * cod, fdim * dom);
    for (Eigen::Index a = 0; a < limit; ++a) {
      Word shifted = basis.word_at(a);
      shifted.letters.insert(shifted.letters.begin(), j);
      const Eigen::Index idx = basis.index_of(shifted);
      c.middleCols(a * dom, dom) = m.assembled.middleCols(idx * dom, dom);
    }
    for (Eigen::Index b = 0; b < limit; ++b) {
      Word shifted = basis.word_at(b);
      shifted.letters.insert(shifted.letters.begin(), j);
      const Eigen::Index idx = basis.index_of(shifted);
      c.middleRows(idx * cod, cod) -= m.assembled.middleRows(b * cod, cod);
    }
    if (limit < fdim) {
      c.middleCols(limit * dom, (fdim - limit) * dom).setZero();
    }
    worst = std::max(worst, operator_norm(c));
  }
  return worst;
}

bool is_purely_contractive(const TruncatedMultiAnalytic& m, double margin) {
  return operator_norm(symbol_coefficient(m, Word())) < 1.0 - margin;
}

LemmaResiduals verify_lemma_identities(const CharFunInput& input) {
  check_tuple_and_defects(input.t, input.defect);
  const RowOperator& t = input.t;
  const DefectData& dd = input.defect;
  const Eigen::Index d = t.dim_out;
  const Eigen::Index n = t.n();
  FockBasis basis(static_cast<int>(n), input.k);
  const Eigen::Index fdim = basis.dim();
  const auto t_adj = adjoint_blocks(t);
  const ComplexMatrix row = t.row();

  const ComplexMatrix amb = ambient_char_fun(basis, t, dd, t_adj);

  // Theta (I (x) D_T) = (I (x) D_{T*}) N (R~ - I (x) T).
  const ComplexMatrix lhs1 = block_diag_right(amb, fdim, dd.d_right);
  ComplexMatrix r_minus_t = creation_row_shuffled(
      basis, d, ComplexMatrix::Identity(n * d, n * d));
  for (Eigen::Index i = 0; i < fdim; ++i) {
    r_minus_t.block(i * d, i * n * d, d, n * d) -= row;
  }
  const ComplexMatrix rhs1 = block_diag_left(
      dd.d_left, fdim, neumann_apply(basis, t_adj, d, r_minus_t));

  // I + Theta (I (x) T)* = (I (x) D_{T*}) N (I (x) D_{T*}).
  ComplexMatrix lhs2 = block_diag_right(amb, fdim, row.adjoint());
  lhs2 += ComplexMatrix::Identity(fdim * d, fdim * d);
  const ComplexMatrix rhs2 = block_diag_left(
      dd.d_left, fdim,
      neumann_apply(basis, t_adj, d, kron_identity(fdim, dd.d_left)));

  LemmaResiduals out;
  out.defect_identity = operator_norm(lhs1 - rhs1);
  out.resolvent_identity = operator_norm(lhs2 - rhs2);
  return out;
}

}  // namespace charfact
