#include "charfact/constrained.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <utility>

#include "charfact/errors.hpp"

namespace charfact {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double frac(double x) { return x - std::floor(x); }

// Square-root-of-prime multipliers for the Weyl sample schedules.
constexpr double kWeylPrimes[20] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29,
                                    31, 37, 41, 43, 47, 53, 59, 61, 67, 71};

void require_tuple(const RowOperator& t) {
  if (t.dim_out != t.dim_in) {
    throw DimensionMismatch("tuple must act on a single space");
  }
}

void require_commuting(const RowOperator& t, const std::string& where) {
  const double c = max_commutator_norm(t);
  if (c > 1e-10) {
    throw NotCommuting(where + ": tuple is not commuting", c);
  }
}

// Shared generator core: tuples T_j = p_j(base) for random quadratics p_j,
// commuting by construction, rescaled so the row norm is exactly
// `strictness`.
RowOperator polynomial_tuple(Rng& rng, const ComplexMatrix& base, int n,
                             double strictness) {
  const Eigen::Index dim = base.rows();
  const ComplexMatrix base2 = base * base;
  std::vector<ComplexMatrix> blocks;
  blocks.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    ComplexMatrix block =
        rng.gaussian_complex() * ComplexMatrix::Identity(dim, dim);
    block += rng.gaussian_complex() * base;
    block += rng.gaussian_complex() * base2;
    blocks.push_back(std::move(block));
  }
  RowOperator t = make_row_operator(std::move(blocks));
  const double norm = operator_norm(t.row());
  if (norm < 1e-12) {
    t.blocks.front() = strictness * ComplexMatrix::Identity(dim, dim);
  } else {
    for (auto& block : t.blocks) {
      block *= strictness / norm;
    }
  }
  return t;
}

std::vector<BallPoint> weyl_points(int n, int count, double max_radius,
                                   bool l1_budget) {
  if (n < 1) {
    throw DimensionMismatch("sample points need at least one coordinate");
  }
  std::vector<BallPoint> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int i = 1; i <= count; ++i) {
    ComplexVector z(n);
    for (int j = 0; j < n; ++j) {
      const double phase =
          kTwoPi * frac(i * std::sqrt(kWeylPrimes[(2 * j) % 20]));
      const double mag =
          0.2 + 0.8 * frac(i * std::sqrt(kWeylPrimes[(2 * j + 1) % 20]));
      z(j) = std::polar(mag, phase);
    }
    const double size = l1_budget ? z.lpNorm<1>() : z.norm();
    const double target =
        max_radius * static_cast<double>(i) / static_cast<double>(count);
    BallPoint point;
    point.z = z * (target / size);
    out.push_back(std::move(point));
  }
  return out;
}

}  // namespace

SymmetricBasis symmetric_basis(int n, int k) {
  const FockBasis basis(n, k);
  SymmetricBasis out;
  out.n = n;
  out.k = k;
  std::map<std::vector<int>, std::size_t> column_of;
  std::vector<std::vector<Eigen::Index>> members;
  for (Eigen::Index w = 0; w < basis.dim(); ++w) {
    const Word word = basis.word_at(w);
    std::vector<int> degree(static_cast<std::size_t>(n), 0);
    for (int letter : word.letters) {
      degree[static_cast<std::size_t>(letter - 1)] += 1;
    }
    auto it = column_of.find(degree);
    if (it == column_of.end()) {
      column_of.emplace(degree, out.multidegrees.size());
      out.multidegrees.push_back(degree);
      members.push_back({w});
    } else {
      members[it->second].push_back(w);
    }
  }
  out.sym_isometry = ComplexMatrix::Zero(
      basis.dim(), static_cast<Eigen::Index>(out.multidegrees.size()));
  for (std::size_t c = 0; c < members.size(); ++c) {
    const double weight = 1.0 / std::sqrt(static_cast<double>(members[c].size()));
    for (Eigen::Index w : members[c]) {
      out.sym_isometry(w, static_cast<Eigen::Index>(c)) = weight;
    }
  }
  return out;
}

ComplexMatrix theta_point(const RowOperator& t, const BallPoint& z,
                          const RankTolerance& tol) {
  require_tuple(t);
  if (z.z.size() != t.n()) {
    throw DimensionMismatch("point dimension does not match the tuple length");
  }
  require_commuting(t, "theta_point");
  if (!is_row_contraction(t)) {
    throw NotAContraction("theta_point needs a row contraction");
  }
  if (z.z.norm() >= 1.0) {
    throw OutsideBall("sample point must lie in the open unit ball");
  }
  const DefectData dd = defects(t, tol);
  const Eigen::Index d = t.dim_out;
  const Eigen::Index n = t.n();
  ComplexMatrix shifted = ComplexMatrix::Identity(d, d);
  for (Eigen::Index j = 0; j < n; ++j) {
    shifted -= z.z(j) * t.blocks[static_cast<std::size_t>(j)].adjoint();
  }
  const ComplexMatrix inverse =
      shifted.partialPivLu().solve(ComplexMatrix::Identity(d, d));
  ComplexMatrix zd = ComplexMatrix::Zero(d, n * d);
  for (Eigen::Index j = 0; j < n; ++j) {
    zd += z.z(j) * dd.d_right.middleRows(j * d, d);
  }
  const ComplexMatrix full = -t.row() + dd.d_left * inverse * zd;
  return dd.v_left.adjoint() * full * dd.v_right;
}

double series_vs_point(const RowOperator& t, const BallPoint& z, int k,
                       const RankTolerance& tol) {
  require_tuple(t);
  if (z.z.size() != t.n()) {
    throw DimensionMismatch("point dimension does not match the tuple length");
  }
  if (z.z.lpNorm<1>() > 0.5) {
    throw SamplingRestriction(
        "series comparison requires sum of |z_i| at most 1/2");
  }
  const ComplexMatrix point = theta_point(t, z, tol);
  const TruncatedMultiAnalytic theta = char_fun(t, k, tol);
  ComplexMatrix series = ComplexMatrix::Zero(point.rows(), point.cols());
  for (const auto& [alpha, coeff] : theta.coeffs) {
    Complex monomial = 1.0;
    for (int letter : alpha.letters) {
      monomial *= z.z(letter - 1);
    }
    series += monomial * coeff;
  }
  return operator_norm(point - series);
}

ComplexMatrix constrained_char_fun(const RowOperator& t, int k,
                                   const RankTolerance& tol) {
  require_tuple(t);
  require_commuting(t, "constrained_char_fun");
  const TruncatedMultiAnalytic theta = char_fun(t, k, tol);
  const SymmetricBasis sym = symmetric_basis(static_cast<int>(t.n()), k);
  const ComplexMatrix embed_dom =
      kron_fibre_identity(sym.sym_isometry, theta.dom_dim);
  const ComplexMatrix embed_cod =
      kron_fibre_identity(sym.sym_isometry, theta.cod_dim);
  return embed_cod.adjoint() * theta.assembled * embed_dom;
}

double verify_invariance(const RowOperator& t, int k, bool check_commuting,
                         const RankTolerance& tol) {
  require_tuple(t);
  if (check_commuting) {
    require_commuting(t, "verify_invariance");
  }
  const TruncatedMultiAnalytic theta = char_fun(t, k, tol);
  if (theta.dom_dim == 0 || theta.cod_dim == 0) {
    return 0.0;
  }
  const SymmetricBasis sym = symmetric_basis(static_cast<int>(t.n()), k);
  const ComplexMatrix domain_embed =
      kron_fibre_identity(sym.sym_isometry, theta.dom_dim);
  const ComplexMatrix mapped =
      theta.assembled.adjoint() *
      kron_fibre_identity(sym.sym_isometry, theta.cod_dim);
  return operator_norm(mapped -
                       domain_embed * (domain_embed.adjoint() * mapped));
}

ConstrainedCertificate verify_constrained_factorization(
    const UpperTriangularPair& pair, const std::vector<BallPoint>& points,
    double tolerance, const RankTolerance& tol) {
  const RowOperator t = assemble_T(pair, tol);
  require_commuting(pair.a, "verify_constrained_factorization (first tuple)");
  require_commuting(pair.b, "verify_constrained_factorization (second tuple)");
  require_commuting(t, "verify_constrained_factorization (assembled tuple)");
  const DefectUnitaries du = defect_unitaries(pair, tol);
  const JuliaHalmos jl = julia_halmos(pair.coupling, tol);

  ConstrainedCertificate cert;
  cert.points = points;
  cert.tolerance = tolerance;
  cert.residuals.reserve(points.size());
  for (const BallPoint& z : points) {
    const ComplexMatrix lhs = theta_point(t, z, tol);
    const ComplexMatrix point_a = theta_point(pair.a, z, tol);
    const ComplexMatrix point_b = theta_point(pair.b, z, tol);
    ComplexMatrix diag_a = ComplexMatrix::Zero(point_a.rows() + du.dim_l,
                                               point_a.cols() + du.dim_l);
    diag_a.topLeftCorner(point_a.rows(), point_a.cols()) = point_a;
    diag_a.bottomRightCorner(du.dim_l, du.dim_l).setIdentity();
    ComplexMatrix diag_b = ComplexMatrix::Zero(
        point_b.rows() + du.dim_l_star, point_b.cols() + du.dim_l_star);
    diag_b.topLeftCorner(point_b.rows(), point_b.cols()) = point_b;
    diag_b.bottomRightCorner(du.dim_l_star, du.dim_l_star).setIdentity();
    const ComplexMatrix rhs = du.sigma_star.adjoint() * diag_b * jl.matrix *
                              diag_a * du.sigma;
    const double residual = operator_norm(lhs - rhs);
    cert.residuals.push_back(residual);
    cert.max_residual = std::max(cert.max_residual, residual);
  }
  cert.pass = cert.max_residual <= tolerance;
  return cert;
}

std::vector<BallPoint> series_sample_points(int n, int count) {
  return weyl_points(n, count, 0.45, true);
}

std::vector<BallPoint> ball_sample_points(int n, int count) {
  return weyl_points(n, count, 0.95, false);
}

RowOperator random_commuting_row_contraction(std::uint64_t seed, int n,
                                             Eigen::Index dim,
                                             double strictness) {
  Rng rng(seed);
  return random_commuting_row_contraction(rng, n, dim, strictness);
}

RowOperator random_commuting_row_contraction(Rng& rng, int n,
                                             Eigen::Index dim,
                                             double strictness) {
  const ComplexMatrix base =
      rng.gaussian_matrix(dim, dim) / std::sqrt(static_cast<double>(dim));
  return polynomial_tuple(rng, base, n, strictness);
}

UpperTriangularPair random_commuting_pair(std::uint64_t seed, int n,
                                          Eigen::Index dim1,
                                          Eigen::Index dim2,
                                          double strictness) {
  Rng rng(seed);
  return random_commuting_pair(rng, n, dim1, dim2, strictness);
}

UpperTriangularPair random_commuting_pair(Rng& rng, int n, Eigen::Index dim1,
                                          Eigen::Index dim2,
                                          double strictness) {
  const Eigen::Index dim = dim1 + dim2;
  ComplexMatrix base = ComplexMatrix::Zero(dim, dim);
  base.topLeftCorner(dim1, dim1) = rng.gaussian_matrix(dim1, dim1);
  base.topRightCorner(dim1, dim2) = rng.gaussian_matrix(dim1, dim2);
  base.bottomRightCorner(dim2, dim2) = rng.gaussian_matrix(dim2, dim2);
  base /= std::sqrt(static_cast<double>(dim));
  const RowOperator t = polynomial_tuple(rng, base, n, strictness);

  std::vector<ComplexMatrix> a_blocks, b_blocks, x_blocks;
  for (const ComplexMatrix& block : t.blocks) {
    a_blocks.push_back(block.topLeftCorner(dim1, dim1));
    b_blocks.push_back(block.bottomRightCorner(dim2, dim2));
    x_blocks.push_back(block.topRightCorner(dim1, dim2));
  }
  UpperTriangularPair pair;
  pair.a = make_row_operator(std::move(a_blocks));
  pair.b = make_row_operator(std::move(b_blocks));
  pair.coupling =
      extract_L(pair.a, pair.b, make_row_operator(std::move(x_blocks)));
  return pair;
}

}  // namespace charfact
