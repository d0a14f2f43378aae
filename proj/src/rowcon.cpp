#include "charfact/rowcon.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <utility>

namespace charfact {

namespace {
constexpr double kAssembledSlack = 1e-8;
constexpr double kCouplingSlack = 1e-10;
constexpr double kFactorResidual = 1e-8;
constexpr double kExtractedNormSlack = 1e-8;
}  // namespace

ComplexMatrix RowOperator::row() const {
  ComplexMatrix out(dim_out, n() * dim_in);
  for (Eigen::Index j = 0; j < n(); ++j) {
    out.middleCols(j * dim_in, dim_in) = blocks[static_cast<size_t>(j)];
  }
  return out;
}

RowOperator make_row_operator(std::vector<ComplexMatrix> blocks) {
  if (blocks.empty()) {
    throw DimensionMismatch("a row operator needs at least one block");
  }
  RowOperator t;
  t.dim_out = blocks.front().rows();
  t.dim_in = blocks.front().cols();
  for (const auto& b : blocks) {
    if (b.rows() != t.dim_out || b.cols() != t.dim_in) {
      throw DimensionMismatch("row operator blocks must share one shape");
    }
  }
  t.blocks = std::move(blocks);
  return t;
}

RowOperator row_operator_from_row(const ComplexMatrix& row, Eigen::Index n) {
  if (n < 1 || row.cols() % n != 0) {
    throw DimensionMismatch("row width is not a multiple of the tuple size");
  }
  std::vector<ComplexMatrix> blocks;
  const Eigen::Index dim_in = row.cols() / n;
  blocks.reserve(static_cast<size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j) {
    blocks.push_back(row.middleCols(j * dim_in, dim_in));
  }
  return make_row_operator(std::move(blocks));
}

bool is_row_contraction(const RowOperator& t, double slack) {
  if (t.dim_out == 0) return true;
  const ComplexMatrix row = t.row();
  const ComplexMatrix gram = row * row.adjoint();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(gram,
                                                   Eigen::EigenvaluesOnly);
  return eig.eigenvalues().maxCoeff() <= 1.0 + slack;
}

DefectData defects(const RowOperator& t, const RankTolerance& tol) {
  if (!is_row_contraction(t)) {
    throw NotAContraction("defects: tuple is not a row contraction");
  }
  const ComplexMatrix row = t.row();
  DefectData d;
  d.d_right = psd_sqrt(ComplexMatrix::Identity(row.cols(), row.cols()) -
                       row.adjoint() * row);
  d.d_left = psd_sqrt(ComplexMatrix::Identity(row.rows(), row.rows()) -
                      row * row.adjoint());
  d.v_right = range_isometry(d.d_right, tol);
  d.v_left = range_isometry(d.d_left, tol);
  d.rank_right = d.v_right.cols();
  d.rank_left = d.v_left.cols();
  return d;
}

RowOperator assemble_T(const UpperTriangularPair& pair,
                       const RankTolerance& tol) {
  if (pair.a.n() != pair.b.n()) {
    throw DimensionMismatch("diagonal tuples must have the same length");
  }
  if (operator_norm(pair.coupling) > 1.0 + kCouplingSlack) {
    throw NotContractive("coupling exceeds norm 1");
  }
  const DefectData da = defects(pair.a, tol);
  const DefectData db = defects(pair.b, tol);
  if (pair.coupling.rows() != da.rank_left ||
      pair.coupling.cols() != db.rank_right) {
    throw DimensionMismatch("coupling shape does not match the defect ranks");
  }

  const Eigen::Index n = pair.a.n();
  const Eigen::Index d1 = pair.a.dim_in;
  const Eigen::Index d2 = pair.b.dim_in;
  const ComplexMatrix x_row =
      da.d_left * (da.v_left * pair.coupling * db.v_right.adjoint()) * db.d_right;

  std::vector<ComplexMatrix> blocks;
  blocks.reserve(static_cast<size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j) {
    ComplexMatrix block = ComplexMatrix::Zero(d1 + d2, d1 + d2);
    block.topLeftCorner(d1, d1) = pair.a.blocks[static_cast<size_t>(j)];
    block.topRightCorner(d1, d2) = x_row.middleCols(j * d2, d2);
    block.bottomRightCorner(d2, d2) = pair.b.blocks[static_cast<size_t>(j)];
    blocks.push_back(std::move(block));
  }
  RowOperator t = make_row_operator(std::move(blocks));
  if (!is_row_contraction(t, kAssembledSlack)) {
    throw NotAContraction("assembled tuple failed the contraction check");
  }
  return t;
}

ComplexMatrix extract_L(const RowOperator& a, const RowOperator& b,
                        const RowOperator& x, const RankTolerance& tol) {
  if (a.n() != b.n() || a.n() != x.n()) {
    throw DimensionMismatch("tuples must have the same length");
  }
  if (x.dim_out != a.dim_in || x.dim_in != b.dim_in) {
    throw DimensionMismatch("corner blocks must map the second space into the first");
  }
  const DefectData da = defects(a, tol);
  const DefectData db = defects(b, tol);
  const ComplexMatrix x_row = x.row();

  const ComplexMatrix l = da.v_left.adjoint() * pinv(da.d_left, tol) * x_row *
                          pinv(db.d_right, tol) * db.v_right;
  const ComplexMatrix rebuilt =
      da.d_left * (da.v_left * l * db.v_right.adjoint()) * db.d_right;
  const double residual = operator_norm(rebuilt - x_row);
  if (residual > kFactorResidual) {
    throw NotFactorable("corner does not factor through the defect spaces "
                        "(residual " + std::to_string(residual) + ")");
  }
  if (operator_norm(l) > 1.0 + kExtractedNormSlack) {
    throw NotContractive("recovered coupling exceeds norm 1");
  }
  return l;
}

RowOperator random_row_contraction(Rng& rng, int n, Eigen::Index dim,
                                   double strictness) {
  std::vector<ComplexMatrix> blocks;
  blocks.reserve(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) blocks.push_back(rng.gaussian_matrix(dim, dim));
  RowOperator t = make_row_operator(std::move(blocks));
  const double norm = operator_norm(t.row());
  if (norm > 0.0) {
    for (auto& b : t.blocks) b *= strictness / norm;
  }
  return t;
}

RowOperator random_row_contraction(std::uint64_t seed, int n, Eigen::Index dim,
                                   double strictness) {
  Rng rng(seed);
  return random_row_contraction(rng, n, dim, strictness);
}

double max_commutator_norm(const RowOperator& t) {
  if (t.dim_out != t.dim_in) {
    throw DimensionMismatch("commutators need a tuple on a single space");
  }
  double worst = 0.0;
  for (Eigen::Index i = 0; i < t.n(); ++i) {
    for (Eigen::Index j = i + 1; j < t.n(); ++j) {
      const ComplexMatrix& ti = t.blocks[static_cast<size_t>(i)];
      const ComplexMatrix& tj = t.blocks[static_cast<size_t>(j)];
      worst = std::max(worst, operator_norm(ti * tj - tj * ti));
    }
  }
  return worst;
}

bool is_commuting(const RowOperator& t, double tol) {
  return max_commutator_norm(t) <= tol;
}

std::vector<Eigen::Index> tuple_to_split_indices(Eigen::Index n,
                                                 Eigen::Index dim1,
                                                 Eigen::Index dim2) {
  std::vector<Eigen::Index> map(static_cast<size_t>(n * (dim1 + dim2)));
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index r = 0; r < dim1 + dim2; ++r) {
      const Eigen::Index tuple_pos = j * (dim1 + dim2) + r;
      const Eigen::Index split_pos =
          r < dim1 ? j * dim1 + r : n * dim1 + j * dim2 + (r - dim1);
      map[static_cast<size_t>(tuple_pos)] = split_pos;
    }
  }
  return map;
}

ComplexMatrix scatter_rows(const ComplexMatrix& m,
                           const std::vector<Eigen::Index>& to) {
  ComplexMatrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out.row(to[static_cast<size_t>(i)]) = m.row(i);
  }
  return out;
}

ComplexMatrix scatter_cols(const ComplexMatrix& m,
                           const std::vector<Eigen::Index>& to) {
  ComplexMatrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.cols(); ++i) {
    out.col(to[static_cast<size_t>(i)]) = m.col(i);
  }
  return out;
}

}  // namespace charfact
