#include "charfact/factorize.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "charfact/errors.hpp"

namespace charfact {

namespace {

double unitarity_defect(const ComplexMatrix& u) {
  const ComplexMatrix gram_in =
      u.adjoint() * u - ComplexMatrix::Identity(u.cols(), u.cols());
  const ComplexMatrix gram_out =
      u * u.adjoint() - ComplexMatrix::Identity(u.rows(), u.rows());
  return std::max(operator_norm(gram_in), operator_norm(gram_out));
}

void require_unitary(const ComplexMatrix& u, const std::string& name,
                     double slack = 1e-10) {
  if (u.rows() != u.cols()) {
    throw NotUnitary(name + " is not square");
  }
  if (unitarity_defect(u) > slack) {
    throw NotUnitary(name + " is not unitary within " + std::to_string(slack));
  }
}

// In the split row layout, replaces the top block of fdim * dom rows by
// theta * top while keeping the remaining rows: applies diag(theta, I).
ComplexMatrix apply_diag_top(const ComplexMatrix& theta_assembled,
                             Eigen::Index fdim, Eigen::Index dom,
                             const ComplexMatrix& x) {
  const Eigen::Index rest = x.rows() - fdim * dom;
  const ComplexMatrix top = theta_assembled * x.topRows(fdim * dom);
  ComplexMatrix out(top.rows() + rest, x.cols());
  out << top, x.bottomRows(rest);
  return out;
}

// (I (x) left) diag(theta_b, I_high) (I (x) middle) diag(theta_a, I_low)
// (I (x) right), assembled in the mixed tensor layout. The identity paddings
// have fibre dimensions f_low and f_high.
ComplexMatrix sandwich_product(const TruncatedMultiAnalytic& theta_a,
                               Eigen::Index f_low,
                               const ComplexMatrix& middle,
                               const TruncatedMultiAnalytic& theta_b,
                               Eigen::Index f_high,
                               const ComplexMatrix& left,
                               const ComplexMatrix& right) {
  const FockBasis& basis = theta_a.basis;
  const Eigen::Index fdim = basis.dim();
  ComplexMatrix x = kron_identity(fdim, right);
  x = scatter_rows(x, fock_split_indices(fdim, theta_a.dom_dim, f_low));
  x = apply_diag_top(theta_a.assembled, fdim, theta_a.dom_dim, x);
  x = rows_split_to_mixed(x, fdim, theta_a.cod_dim, f_low);
  x = block_diag_left(middle, fdim, x);
  x = scatter_rows(x, fock_split_indices(fdim, theta_b.dom_dim, f_high));
  x = apply_diag_top(theta_b.assembled, fdim, theta_b.dom_dim, x);
  x = rows_split_to_mixed(x, fdim, theta_b.cod_dim, f_high);
  return block_diag_left(left, fdim, x);
}

void require_square_tuples(const RowOperator& a, const RowOperator& b) {
  if (a.dim_out != a.dim_in || b.dim_out != b.dim_in) {
    throw DimensionMismatch("diagonal tuples must act on a single space");
  }
  if (a.n() != b.n()) {
    throw DimensionMismatch("diagonal tuples must have the same length");
  }
}

}  // namespace

JuliaHalmos julia_halmos(const ComplexMatrix& l, const RankTolerance& tol) {
  const ContractionDefects cd = contraction_defects(l, tol);
  const Eigen::Index p = l.rows();
  const Eigen::Index q = l.cols();
  const Eigen::Index rl = cd.rank_right;
  const Eigen::Index rls = cd.rank_left;
  JuliaHalmos out;
  out.l = l;
  out.defect_dim = rl;
  out.defect_star_dim = rls;
  out.matrix = ComplexMatrix(q + rls, p + rl);
  out.matrix.topLeftCorner(q, p) = l.adjoint();
  out.matrix.topRightCorner(q, rl) = cd.d_right * cd.v_right;
  out.matrix.bottomLeftCorner(rls, p) = cd.v_left.adjoint() * cd.d_left;
  out.matrix.bottomRightCorner(rls, rl) =
      -(cd.v_left.adjoint() * l * cd.v_right);
  out.unitarity = unitarity_defect(out.matrix);
  return out;
}

DefectUnitaries defect_unitaries(const UpperTriangularPair& pair,
                                 const RankTolerance& tol) {
  require_square_tuples(pair.a, pair.b);
  const RowOperator t = assemble_T(pair, tol);
  const Eigen::Index n = t.n();
  const Eigen::Index d1 = pair.a.dim_out;
  const Eigen::Index d2 = pair.b.dim_out;
  const DefectData da = defects(pair.a, tol);
  const DefectData db = defects(pair.b, tol);
  const DefectData dt = defects(t, tol);
  const ContractionDefects dl = contraction_defects(pair.coupling, tol);

  const Eigen::Index ra = da.rank_right;
  const Eigen::Index rbs = db.rank_left;
  const Eigen::Index rl = dl.rank_right;
  const Eigen::Index rls = dl.rank_left;

  if (dt.rank_right != ra + rl || dt.rank_left != rbs + rls) {
    throw RankDeficiencyWarning(
        "defect ranks do not split: rank D_T = " +
        std::to_string(dt.rank_right) + " vs " + std::to_string(ra + rl) +
        ", rank D_T* = " + std::to_string(dt.rank_left) + " vs " +
        std::to_string(rbs + rls) +
        " (boundary-rank instance; adjust the rank tolerance)");
  }

  // sigma D_T = [[D_A, -A* L^ D_B], [0, D_L D_B]] in output defect
  // coordinates, columns in the split layout (n copies of H1, then of H2).
  const ComplexMatrix a_row = pair.a.row();
  const ComplexMatrix b_row = pair.b.row();
  const ComplexMatrix lhat =
      da.v_left * pair.coupling * db.v_right.adjoint();
  ComplexMatrix m = ComplexMatrix::Zero(ra + rl, n * (d1 + d2));
  m.topLeftCorner(ra, n * d1) = da.v_right.adjoint() * da.d_right;
  m.topRightCorner(ra, n * d2) =
      -(da.v_right.adjoint() * a_row.adjoint() * lhat * db.d_right);
  m.bottomRightCorner(rl, n * d2) = dl.v_right.adjoint() * dl.d_right *
                                    db.v_right.adjoint() * db.d_right;

  const auto shuffle = tuple_to_split_indices(n, d1, d2);
  const ComplexMatrix dt_right_split =
      scatter_cols(scatter_rows(dt.d_right, shuffle), shuffle);
  const ComplexMatrix vt_split = scatter_rows(dt.v_right, shuffle);

  DefectUnitaries out;
  out.sigma = m * pinv(dt_right_split, tol) * vt_split;
  out.sigma_identity = operator_norm(
      out.sigma * vt_split.adjoint() * dt_right_split - m);

  // sigma_* D_T* = [[-B L^* D_A*, D_B*], [D_L* D_A*, 0]] in output defect
  // coordinates, columns in the natural H1 (+) H2 layout.
  ComplexMatrix m_star = ComplexMatrix::Zero(rbs + rls, d1 + d2);
  m_star.topLeftCorner(rbs, d1) = -(db.v_left.adjoint() * b_row *
                                    db.v_right * pair.coupling.adjoint() *
                                    da.v_left.adjoint() * da.d_left);
  m_star.topRightCorner(rbs, d2) = db.v_left.adjoint() * db.d_left;
  m_star.bottomLeftCorner(rls, d1) = dl.v_left.adjoint() * dl.d_left *
                                     da.v_left.adjoint() * da.d_left;

  out.sigma_star = m_star * pinv(dt.d_left, tol) * dt.v_left;
  out.sigma_star_identity = operator_norm(
      out.sigma_star * dt.v_left.adjoint() * dt.d_left - m_star);

  out.dim_a = ra;
  out.dim_l = rl;
  out.dim_b_star = rbs;
  out.dim_l_star = rls;
  out.sigma_unitarity = unitarity_defect(out.sigma);
  out.sigma_star_unitarity = unitarity_defect(out.sigma_star);
  return out;
}

TruncatedMultiAnalytic factorization_rhs(const UpperTriangularPair& pair,
                                         int k, const RankTolerance& tol) {
  const DefectUnitaries du = defect_unitaries(pair, tol);
  const JuliaHalmos jl = julia_halmos(pair.coupling, tol);
  const TruncatedMultiAnalytic theta_a = char_fun(pair.a, k, tol);
  const TruncatedMultiAnalytic theta_b = char_fun(pair.b, k, tol);
  ComplexMatrix assembled =
      sandwich_product(theta_a, du.dim_l, jl.matrix, theta_b, du.dim_l_star,
                       du.sigma_star.adjoint(), du.sigma);
  return from_assembled(theta_a.basis, du.sigma.cols(),
                        du.sigma_star.cols(), std::move(assembled));
}

FactorizationCertificate verify_factorization(const UpperTriangularPair& pair,
                                              int k, double tolerance,
                                              const RankTolerance& tol) {
  const RowOperator t = assemble_T(pair, tol);
  const TruncatedMultiAnalytic lhs = char_fun(t, k, tol);
  const TruncatedMultiAnalytic rhs = factorization_rhs(pair, k, tol);
  const DefectUnitaries du = defect_unitaries(pair, tol);
  const JuliaHalmos jl = julia_halmos(pair.coupling, tol);

  FactorizationCertificate cert;
  cert.lhs = lhs.assembled;
  cert.rhs = rhs.assembled;
  cert.residual = operator_norm(cert.lhs - cert.rhs);
  cert.sigma_unitarity = du.sigma_unitarity;
  cert.sigma_star_unitarity = du.sigma_star_unitarity;
  cert.jl_unitarity = jl.unitarity;
  cert.k = k;
  cert.tolerance = tolerance;
  cert.pass = cert.residual <= tolerance;
  return cert;
}

WStarBlocks decompose_w(const ComplexMatrix& w, Eigen::Index d_a_star,
                        Eigen::Index d_b) {
  if (d_a_star < 0 || d_b < 0 || d_a_star > w.cols() || d_b > w.rows()) {
    throw DimensionMismatch("block split exceeds the unitary's shape");
  }
  require_unitary(w, "coupling unitary");
  const ComplexMatrix ws = w.adjoint();
  WStarBlocks out;
  out.l = ws.topLeftCorner(d_a_star, d_b);
  out.m = ws.topRightCorner(d_a_star, ws.cols() - d_b);
  out.n = ws.bottomLeftCorner(ws.rows() - d_a_star, d_b);
  out.k = ws.bottomRightCorner(ws.rows() - d_a_star, ws.cols() - d_b);
  return out;
}

ConverseResult converse_build(const RowOperator& a, const RowOperator& b,
                              const ComplexMatrix& w, Eigen::Index f_dim,
                              Eigen::Index f_star_dim, int k,
                              const RankTolerance& tol) {
  require_square_tuples(a, b);
  const DefectData da = defects(a, tol);
  const DefectData db = defects(b, tol);
  const Eigen::Index ras = da.rank_left;
  const Eigen::Index rb = db.rank_right;
  if (w.rows() != rb + f_star_dim || w.cols() != ras + f_dim) {
    throw DimensionMismatch(
        "unitary shape does not match the declared defect and slack dims");
  }
  const WStarBlocks blocks = decompose_w(w, ras, rb);
  const ContractionDefects dl = contraction_defects(blocks.l, tol);
  const Eigen::Index f_prime = f_dim - numerical_rank(blocks.n, tol);
  const Eigen::Index f_star_prime = f_star_dim - numerical_rank(blocks.m, tol);
  if (f_prime != 0 || f_star_prime != 0) {
    throw NotPurelyContractive(
        "the coupled product fixes a slice of the slack spaces "
        "(the construction requires both orthogonal complements trivial)",
        static_cast<long>(f_prime), static_cast<long>(f_star_prime));
  }

  ConverseResult res;
  res.coupling = blocks.l;
  res.f_prime_dim = 0;
  res.f_star_prime_dim = 0;
  res.u = dl.v_right.adjoint() * dl.d_right * pinv(blocks.n, tol);
  res.v = dl.v_left.adjoint() * dl.d_left * pinv(blocks.m.adjoint(), tol);
  res.u_unitarity = unitarity_defect(res.u);
  res.v_unitarity = unitarity_defect(res.v);
  res.k1_residual = operator_norm(
      res.v * blocks.k.adjoint() * res.u.adjoint() +
      dl.v_left.adjoint() * blocks.l * dl.v_right);

  UpperTriangularPair pair;
  pair.a = a;
  pair.b = b;
  pair.coupling = blocks.l;
  res.t = assemble_T(pair, tol);

  const DefectUnitaries du = defect_unitaries(pair, tol);
  const TruncatedMultiAnalytic theta_a = char_fun(a, k, tol);
  const TruncatedMultiAnalytic theta_b = char_fun(b, k, tol);
  const TruncatedMultiAnalytic theta_t = char_fun(res.t, k, tol);
  const Eigen::Index fdim = theta_a.basis.dim();
  const Eigen::Index ra = theta_a.dom_dim;
  const Eigen::Index rbs = theta_b.cod_dim;
  const Eigen::Index rl = dl.rank_right;
  const Eigen::Index rls = dl.rank_left;

  ComplexMatrix uprime = ComplexMatrix::Zero(ra + rl, ra + f_dim);
  uprime.topLeftCorner(ra, ra).setIdentity();
  uprime.bottomRightCorner(rl, f_dim) = res.u;
  ComplexMatrix vprime = ComplexMatrix::Zero(rbs + rls, rbs + f_star_dim);
  vprime.topLeftCorner(rbs, rbs).setIdentity();
  vprime.bottomRightCorner(rls, f_star_dim) = res.v;

  const ComplexMatrix lhs = sandwich_product(
      theta_a, f_dim, w, theta_b, f_star_dim, vprime, uprime.adjoint());
  const ComplexMatrix rhs = block_diag_left(
      du.sigma_star, fdim,
      block_diag_right(theta_t.assembled, fdim, du.sigma.adjoint()));
  res.coincidence = operator_norm(lhs - rhs);
  return res;
}

double verify_coincidence(const TruncatedMultiAnalytic& m,
                          const TruncatedMultiAnalytic& m_prime,
                          const ComplexMatrix& w,
                          const ComplexMatrix& w_star) {
  if (m.basis.alphabet() != m_prime.basis.alphabet() ||
      m.basis.truncation() != m_prime.basis.truncation()) {
    throw DimensionMismatch("operators live on different truncated spaces");
  }
  if (w.cols() != m.dom_dim || w.rows() != m_prime.dom_dim ||
      w_star.cols() != m.cod_dim || w_star.rows() != m_prime.cod_dim) {
    throw DimensionMismatch(
        "intertwiner shapes do not match the operator fibres");
  }
  require_unitary(w, "domain intertwiner");
  require_unitary(w_star, "codomain intertwiner");
  const Eigen::Index fdim = m.basis.dim();
  return operator_norm(block_diag_left(w_star, fdim, m.assembled) -
                       block_diag_right(m_prime.assembled, fdim, w));
}

}  // namespace charfact
