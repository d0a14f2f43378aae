#include "charfact/matkit.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <vector>

namespace charfact {

namespace {

double env_rank_cutoff() {
  const char* raw = std::getenv("CHARFACT_RANK_TOL");
  if (raw == nullptr || *raw == '\0') return 1e-10;
  char* end = nullptr;
  const double value = std::strtod(raw, &end);
  if (end == raw || *end != '\0' || !std::isfinite(value) || value <= 0.0) {
    throw ParseError("CHARFACT_RANK_TOL must be a positive real, got '" +
                     std::string(raw) + "'");
  }
  return value;
}

void fix_column_phases(ComplexMatrix& v) {
  for (Eigen::Index c = 0; c < v.cols(); ++c) {
    Eigen::Index where = 0;
    v.col(c).cwiseAbs().maxCoeff(&where);
    const Complex pivot = v(where, c);
    const double mag = std::abs(pivot);
    if (mag > 0.0) v.col(c) *= std::conj(pivot) / mag;
  }
}

}  // namespace

RankTolerance default_rank_tolerance() {
  static const double cutoff = env_rank_cutoff();
  return RankTolerance{cutoff};
}

double operator_norm(const ComplexMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  const Eigen::Index small_side = std::min(m.rows(), m.cols());
  if (small_side <= 16) {
    return Eigen::JacobiSVD<ComplexMatrix>(m).singularValues()(0);
  }
  if (small_side >= 48) {
    // Top eigenvalue of the Gram matrix on the smaller side. The Gram
    // product is backward-stable at the scale of ||m||^2, so the dominant
    // eigenvalue (and hence the returned norm) keeps full relative accuracy,
    // at a fraction of the cost of a full SVD of a wide or tall matrix.
    const ComplexMatrix gram = (m.rows() <= m.cols())
                                   ? ComplexMatrix(m * m.adjoint())
                                   : ComplexMatrix(m.adjoint() * m);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(
        (gram + gram.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff()));
  }
  return Eigen::BDCSVD<ComplexMatrix>(m).singularValues()(0);
}

Eigen::Index numerical_rank(const ComplexMatrix& m, const RankTolerance& tol) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  const Eigen::VectorXd sv = Eigen::JacobiSVD<ComplexMatrix>(m).singularValues();
  const double cutoff = tol.relative_cutoff * sv(0);
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff) ++rank;
  return sv(0) == 0.0 ? 0 : rank;
}

ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) {
    throw DimensionMismatch("psd_sqrt expects a square matrix");
  }
  if (m.rows() == 0) return m;
  const double scale = std::max(1.0, m.norm());
  if ((m - m.adjoint()).norm() > 1e-10 * scale) {
    throw NotHermitian("psd_sqrt: matrix is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig((m + m.adjoint()) / 2.0);
  Eigen::VectorXd vals = eig.eigenvalues();
  const double sigma_max =
      std::max(std::abs(vals(0)), std::abs(vals(vals.size() - 1)));
  const double band = 10.0 * std::numeric_limits<double>::epsilon() * sigma_max;
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    if (vals(i) < -band) {
      throw NotPSD("psd_sqrt: eigenvalue " + std::to_string(vals(i)) +
                   " below the clamp band");
    }
    vals(i) = std::max(vals(i), 0.0);
  }
  const ComplexMatrix root = eig.eigenvectors() *
                             vals.cwiseSqrt().asDiagonal() *
                             eig.eigenvectors().adjoint();
  return (root + root.adjoint()) / 2.0;
}

ComplexMatrix range_isometry(const ComplexMatrix& m, const RankTolerance& tol) {
  if (m.rows() == 0 || m.cols() == 0) return ComplexMatrix(m.rows(), 0);
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeThinU);
  const Eigen::VectorXd sv = svd.singularValues();
  const double cutoff = tol.relative_cutoff * sv(0);
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff) ++rank;
  if (sv(0) == 0.0) rank = 0;
  ComplexMatrix v = svd.matrixU().leftCols(rank);
  fix_column_phases(v);
  return v;
}

ComplexMatrix pinv(const ComplexMatrix& m, const RankTolerance& tol) {
  if (m.rows() == 0 || m.cols() == 0) return ComplexMatrix::Zero(m.cols(), m.rows());
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd sv = svd.singularValues();
  const double cutoff = tol.relative_cutoff * sv(0);
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff && sv(0) > 0.0) inv(i) = 1.0 / sv(i);
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

ContractionDefects contraction_defects(const ComplexMatrix& l,
                                       const RankTolerance& tol) {
  const Eigen::Index rows = l.rows();
  const Eigen::Index cols = l.cols();
  ContractionDefects out;
  if (rows == 0 || cols == 0) {
    // A map to or from the zero space: the nontrivial side's defect is the
    // full identity, the other side is zero-dimensional.
    out.d_right = ComplexMatrix::Identity(cols, cols);
    out.d_left = ComplexMatrix::Identity(rows, rows);
    out.v_right = ComplexMatrix::Identity(cols, cols);
    out.v_left = ComplexMatrix::Identity(rows, rows);
    out.rank_right = cols;
    out.rank_left = rows;
    return out;
  }

  Eigen::JacobiSVD<ComplexMatrix> svd(l, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd sv = svd.singularValues();
  if (sv(0) > 1.0 + 1e-8) {
    throw NotContractive("contraction_defects: norm " + std::to_string(sv(0)));
  }

  // Defect singular values; indices past min(rows, cols) carry the implicit
  // zero singular values of L, i.e. defect value 1.
  const Eigen::Index shared = sv.size();
  auto defect_value = [&](Eigen::Index i) {
    if (i >= shared) return 1.0;
    return std::sqrt(std::max(0.0, 1.0 - sv(i) * sv(i)));
  };

  double scale = 0.0;
  for (Eigen::Index i = 0; i < cols; ++i) scale = std::max(scale, defect_value(i));
  for (Eigen::Index i = 0; i < rows; ++i) scale = std::max(scale, defect_value(i));
  const double cutoff = tol.relative_cutoff * scale;

  Eigen::VectorXd f_right(cols), f_left(rows);
  std::vector<Eigen::Index> keep_right, keep_left;
  for (Eigen::Index i = 0; i < cols; ++i) {
    f_right(i) = defect_value(i);
    if (scale > 0.0 && f_right(i) > cutoff) keep_right.push_back(i);
  }
  for (Eigen::Index i = 0; i < rows; ++i) {
    f_left(i) = defect_value(i);
    if (scale > 0.0 && f_left(i) > cutoff) keep_left.push_back(i);
  }

  const ComplexMatrix v_full = svd.matrixV();
  const ComplexMatrix u_full = svd.matrixU();
  out.d_right = v_full * f_right.asDiagonal() * v_full.adjoint();
  out.d_right = (out.d_right + out.d_right.adjoint()) / 2.0;
  out.d_left = u_full * f_left.asDiagonal() * u_full.adjoint();
  out.d_left = (out.d_left + out.d_left.adjoint()) / 2.0;

  out.rank_right = static_cast<Eigen::Index>(keep_right.size());
  out.rank_left = static_cast<Eigen::Index>(keep_left.size());
  out.v_right = ComplexMatrix(cols, out.rank_right);
  for (Eigen::Index i = 0; i < out.rank_right; ++i) {
    out.v_right.col(i) = v_full.col(keep_right[static_cast<size_t>(i)]);
  }
  out.v_left = ComplexMatrix(rows, out.rank_left);
  for (Eigen::Index i = 0; i < out.rank_left; ++i) {
    out.v_left.col(i) = u_full.col(keep_left[static_cast<size_t>(i)]);
  }
  fix_column_phases(out.v_right);
  fix_column_phases(out.v_left);
  return out;
}

}  // namespace charfact
