#include <cmath>
#include <initializer_list>
#include <vector>

#include "charfact/charfun.hpp"
#include "charfact/errors.hpp"
#include "charfact/factorize.hpp"
#include "charfact/random.hpp"
#include "charfact/rowcon.hpp"
#include "doctest.h"

using namespace charfact;

namespace {

RowOperator scalar_tuple(std::initializer_list<double> entries) {
  std::vector<ComplexMatrix> blocks;
  for (double x : entries) {
    blocks.push_back(x * ComplexMatrix::Identity(1, 1));
  }
  return make_row_operator(std::move(blocks));
}

UpperTriangularPair random_pair(Rng& rng, int n, Eigen::Index d1,
                                Eigen::Index d2, double coupling_norm) {
  UpperTriangularPair pair;
  pair.a = random_row_contraction(rng, n, d1, 0.9);
  pair.b = random_row_contraction(rng, n, d2, 0.9);
  const DefectData da = defects(pair.a, default_rank_tolerance());
  const DefectData db = defects(pair.b, default_rank_tolerance());
  pair.coupling =
      random_contraction(rng, da.rank_left, db.rank_right, coupling_norm);
  return pair;
}

}  // namespace

TEST_SUITE("factorize") {

TEST_CASE("rotation matrix of scalar contractions matches the closed form") {
  const double r = std::sqrt(0.75);

  const JuliaHalmos zero = julia_halmos(ComplexMatrix::Zero(1, 1));
  CHECK(zero.defect_dim == 1);
  CHECK(zero.defect_star_dim == 1);
  ComplexMatrix swap(2, 2);
  swap << 0, 1, 1, 0;
  CHECK(operator_norm(zero.matrix - swap) < 1e-15);
  CHECK(zero.unitarity < 1e-15);

  const JuliaHalmos half = julia_halmos(0.5 * ComplexMatrix::Identity(1, 1));
  ComplexMatrix expected(2, 2);
  expected << 0.5, r, r, -0.5;
  CHECK(operator_norm(half.matrix - expected) < 1e-12);
  CHECK(half.unitarity < 1e-12);

  const JuliaHalmos one = julia_halmos(ComplexMatrix::Identity(1, 1));
  CHECK(one.defect_dim == 0);
  CHECK(one.defect_star_dim == 0);
  CHECK(one.matrix.rows() == 1);
  CHECK(std::abs(one.matrix(0, 0) - Complex(1.0)) < 1e-15);
  CHECK(one.unitarity < 1e-12);
}

TEST_CASE("rotation matrix of a rectangular contraction is unitary") {
  Rng rng(21);
  const ComplexMatrix l = random_contraction(rng, 1, 2, 0.7);
  const JuliaHalmos jl = julia_halmos(l);
  CHECK(jl.defect_dim == 2);
  CHECK(jl.defect_star_dim == 1);
  CHECK(jl.matrix.rows() == 3);
  CHECK(jl.matrix.cols() == 3);
  CHECK(jl.unitarity < 1e-10);
  CHECK(operator_norm(jl.matrix.topLeftCorner(2, 1) - l.adjoint()) == 0.0);
}

TEST_CASE("unitary block decomposition and its defect identity") {
  ComplexMatrix w(2, 2);
  w << 0, 1, 1, 0;
  const WStarBlocks blocks = decompose_w(w, 1, 1);
  CHECK(std::abs(blocks.l(0, 0)) == 0.0);
  CHECK(std::abs(blocks.m(0, 0) - Complex(1.0)) == 0.0);
  CHECK(std::abs(blocks.n(0, 0) - Complex(1.0)) == 0.0);
  CHECK(std::abs(blocks.k(0, 0)) == 0.0);

  Rng rng(22);
  const ComplexMatrix haar = random_unitary(rng, 4);
  const WStarBlocks parts = decompose_w(haar, 1, 2);
  const ComplexMatrix gram =
      parts.l.adjoint() * parts.l + parts.n.adjoint() * parts.n;
  CHECK(operator_norm(gram - ComplexMatrix::Identity(2, 2)) < 1e-13);

  CHECK_THROWS_AS(decompose_w(0.5 * ComplexMatrix::Identity(2, 2), 1, 1),
                  NotUnitary);
  CHECK_THROWS_AS(decompose_w(w, 3, 1), DimensionMismatch);
}

TEST_CASE("defect rotations for the scalar coupling oracle") {
  UpperTriangularPair pair;
  pair.a = scalar_tuple({0.0});
  pair.b = scalar_tuple({0.0});
  pair.coupling = 0.5 * ComplexMatrix::Identity(1, 1);
  const DefectUnitaries du = defect_unitaries(pair);
  CHECK(du.dim_a == 1);
  CHECK(du.dim_l == 1);
  CHECK(du.dim_b_star == 1);
  CHECK(du.dim_l_star == 1);
  // Defect coordinates are ordered by decreasing defect value, which lines
  // the full-defect direction (from the zero diagonal block) up first on
  // both sides; both rotations then reduce to the identity.
  CHECK(operator_norm(du.sigma - ComplexMatrix::Identity(2, 2)) < 1e-12);
  CHECK(operator_norm(du.sigma_star - ComplexMatrix::Identity(2, 2)) <
        1e-12);
  CHECK(du.sigma_unitarity < 1e-12);
  CHECK(du.sigma_star_unitarity < 1e-12);
  CHECK(du.sigma_identity < 1e-12);
  CHECK(du.sigma_star_identity < 1e-12);
}

TEST_CASE("triangular product matches the assembled function exactly for "
          "scalar couplings") {
  UpperTriangularPair pair;
  pair.a = scalar_tuple({0.0});
  pair.b = scalar_tuple({0.0});

  pair.coupling = ComplexMatrix::Zero(1, 1);
  FactorizationCertificate zero = verify_factorization(pair, 4, 1e-10);
  CHECK(zero.residual < 1e-12);
  CHECK(zero.pass);

  pair.coupling = 0.5 * ComplexMatrix::Identity(1, 1);
  FactorizationCertificate half = verify_factorization(pair, 4, 1e-10);
  CHECK(half.residual < 1e-12);
  CHECK(half.sigma_unitarity < 1e-12);
  CHECK(half.sigma_star_unitarity < 1e-12);
  CHECK(half.jl_unitarity < 1e-12);
  CHECK(half.pass);
}

TEST_CASE("triangular product matches on a seeded generic pair") {
  Rng rng(23);
  const UpperTriangularPair pair = random_pair(rng, 2, 2, 2, 0.7);
  const FactorizationCertificate cert = verify_factorization(pair, 3, 1e-8);
  CHECK(cert.residual <= 1e-8);
  CHECK(cert.sigma_unitarity <= 1e-10);
  CHECK(cert.sigma_star_unitarity <= 1e-10);
  CHECK(cert.jl_unitarity <= 1e-10);
  CHECK(cert.pass);
  CHECK(cert.lhs.rows() == cert.rhs.rows());
  CHECK(cert.lhs.cols() == cert.rhs.cols());
}

TEST_CASE("coisometric diagonal block collapses the coupling to zero "
          "dimensions") {
  Rng rng(24);
  UpperTriangularPair pair;
  pair.a = scalar_tuple({1.0, 0.0});
  pair.b = random_row_contraction(rng, 2, 1, 0.9);
  const DefectData db = defects(pair.b, default_rank_tolerance());
  pair.coupling = ComplexMatrix::Zero(0, db.rank_right);
  const DefectUnitaries du = defect_unitaries(pair);
  CHECK(du.dim_l_star == 0);
  CHECK(du.dim_l == db.rank_right);
  const FactorizationCertificate cert = verify_factorization(pair, 3, 1e-8);
  CHECK(cert.residual <= 1e-8);
  CHECK(cert.pass);
}

TEST_CASE("converse construction for scalar diagonals and a planar rotation") {
  const RowOperator a = scalar_tuple({0.0});
  const RowOperator b = scalar_tuple({0.0});
  Rng rng(25);
  const ComplexMatrix w = random_unitary(rng, 2);
  const ConverseResult res = converse_build(a, b, w, 1, 1, 4);
  CHECK(res.f_prime_dim == 0);
  CHECK(res.f_star_prime_dim == 0);
  CHECK(res.u_unitarity < 1e-12);
  CHECK(res.v_unitarity < 1e-12);
  CHECK(res.k1_residual < 1e-12);
  CHECK(res.coincidence < 1e-10);
  CHECK(is_row_contraction(res.t));
  // The assembled tuple carries the coupling in its top-right corner.
  CHECK(std::abs(res.t.row()(0, 1) - res.coupling(0, 0)) < 1e-13);
}

TEST_CASE("converse construction on seeded generic diagonals") {
  Rng rng(26);
  const RowOperator a = random_row_contraction(rng, 2, 2, 0.9);
  const RowOperator b = random_row_contraction(rng, 2, 2, 0.9);
  const DefectData da = defects(a, default_rank_tolerance());
  const DefectData db = defects(b, default_rank_tolerance());
  const Eigen::Index f_dim = db.rank_right;
  const Eigen::Index f_star_dim = da.rank_left;
  const ComplexMatrix w =
      random_unitary(rng, da.rank_left + f_dim);
  REQUIRE(w.rows() == db.rank_right + f_star_dim);
  const ConverseResult res = converse_build(a, b, w, f_dim, f_star_dim, 3);
  CHECK(res.f_prime_dim == 0);
  CHECK(res.f_star_prime_dim == 0);
  CHECK(res.u_unitarity <= 1e-10);
  CHECK(res.v_unitarity <= 1e-10);
  CHECK(res.k1_residual <= 1e-9);
  CHECK(res.coincidence <= 1e-8);
  CHECK(is_row_contraction(res.t));
}

TEST_CASE("padded slack directions are rejected as not purely contractive") {
  const RowOperator a = scalar_tuple({0.0});
  const RowOperator b = scalar_tuple({0.0});
  Rng rng(27);
  const ComplexMatrix w = random_unitary(rng, 2);
  ComplexMatrix padded = ComplexMatrix::Identity(3, 3);
  padded.topLeftCorner(2, 2) = w;
  bool threw = false;
  try {
    converse_build(a, b, padded, 2, 2, 3);
  } catch (const NotPurelyContractive& e) {
    threw = true;
    CHECK(e.f_prime_dim >= 1);
    CHECK(e.f_star_prime_dim >= 1);
  }
  CHECK(threw);
}

TEST_CASE("coincidence check accepts conjugated coefficients and rejects "
          "non-unitary intertwiners") {
  const RowOperator t = random_row_contraction(28, 2, 2, 0.9);
  const TruncatedMultiAnalytic theta = char_fun(t, 3);
  Rng rng(29);
  const ComplexMatrix w = random_unitary(rng, theta.dom_dim);
  const ComplexMatrix w_star = random_unitary(rng, theta.cod_dim);
  std::map<Word, ComplexMatrix> conjugated;
  for (const auto& [word, coeff] : theta.coeffs) {
    conjugated[word] = w_star * coeff * w.adjoint();
  }
  const TruncatedMultiAnalytic theta_prime = from_coefficients(
      theta.basis, theta.dom_dim, theta.cod_dim, conjugated);
  CHECK(verify_coincidence(theta, theta_prime, w, w_star) < 1e-12);
  CHECK_THROWS_AS(verify_coincidence(theta, theta_prime, 2.0 * w, w_star),
                  NotUnitary);
}

}  // TEST_SUITE
