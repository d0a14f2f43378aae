#include <cmath>
#include <vector>

#include "charfact/charfun.hpp"
#include "charfact/constrained.hpp"
#include "charfact/errors.hpp"
#include "charfact/random.hpp"
#include "charfact/rowcon.hpp"
#include "doctest.h"

using namespace charfact;

namespace {

BallPoint scalar_point(Complex z) {
  BallPoint p;
  p.z = ComplexVector::Constant(1, z);
  return p;
}

RowOperator blaschke_tuple(double a) {
  std::vector<ComplexMatrix> blocks;
  blocks.push_back(a * ComplexMatrix::Identity(1, 1));
  return make_row_operator(std::move(blocks));
}

}  // namespace

TEST_SUITE("constrained") {

TEST_CASE("symmetric subspace of two letters at depth two") {
  const SymmetricBasis sym = symmetric_basis(2, 2);
  REQUIRE(sym.multidegrees.size() == 6);
  CHECK(sym.sym_isometry.rows() == 7);
  CHECK(sym.sym_isometry.cols() == 6);
  CHECK(operator_norm(sym.sym_isometry.adjoint() * sym.sym_isometry -
                      ComplexMatrix::Identity(6, 6)) < 1e-14);
  CHECK(sym.multidegrees[0] == std::vector<int>{0, 0});
  CHECK(sym.multidegrees[4] == std::vector<int>{1, 1});
  // The mixed multidegree column averages the two words of that degree.
  const double r = 1.0 / std::sqrt(2.0);
  ComplexVector mixed = ComplexVector::Zero(7);
  mixed(4) = r;  // word 12
  mixed(5) = r;  // word 21
  CHECK((sym.sym_isometry.col(4) - mixed).norm() < 1e-14);
}

TEST_CASE("single-letter symmetric compression is the identity") {
  const RowOperator t = blaschke_tuple(0.5);
  const TruncatedMultiAnalytic theta = char_fun(t, 4);
  const ComplexMatrix compressed = constrained_char_fun(t, 4);
  CHECK((compressed - theta.assembled).norm() < 1e-14);
}

TEST_CASE("pointwise value reproduces the scalar Moebius transform") {
  const RowOperator t = blaschke_tuple(0.5);
  const ComplexMatrix at_z = theta_point(t, scalar_point(0.3));
  REQUIRE(at_z.rows() == 1);
  REQUIRE(at_z.cols() == 1);
  const Complex expected = (0.3 - 0.5) / (1.0 - 0.5 * 0.3);
  CHECK(std::abs(at_z(0, 0) - expected) < 1e-14);
  const ComplexMatrix at_zero = theta_point(t, scalar_point(0.0));
  CHECK(std::abs(at_zero(0, 0) + 0.5) < 1e-15);
}

TEST_CASE("pointwise value at the origin is the vacuum coefficient") {
  const RowOperator t = random_commuting_row_contraction(31, 2, 3, 0.9);
  BallPoint origin;
  origin.z = ComplexVector::Zero(2);
  const ComplexMatrix at_zero = theta_point(t, origin);
  const ComplexMatrix vacuum =
      symbol_coefficient(char_fun(t, 2), Word{});
  CHECK(operator_norm(at_zero - vacuum) < 1e-13);
}

TEST_CASE("pointwise evaluation validates its input") {
  const RowOperator t = blaschke_tuple(0.5);
  CHECK_THROWS_AS(theta_point(t, scalar_point(1.0)), OutsideBall);
  BallPoint wrong_size;
  wrong_size.z = ComplexVector::Zero(2);
  CHECK_THROWS_AS(theta_point(t, wrong_size), DimensionMismatch);
  const RowOperator generic = random_row_contraction(32, 2, 2, 0.9);
  BallPoint origin;
  origin.z = ComplexVector::Zero(2);
  CHECK_THROWS_AS(theta_point(generic, origin), NotCommuting);
}

TEST_CASE("truncated series approximates the pointwise value") {
  const RowOperator t = blaschke_tuple(0.5);
  CHECK(series_vs_point(t, scalar_point(0.4), 8) <=
        std::pow(2.0, -8) + 1e-10);
  CHECK_THROWS_AS(series_vs_point(t, scalar_point(0.6), 8),
                  SamplingRestriction);

  const RowOperator c = random_commuting_row_contraction(33, 2, 2, 0.9);
  BallPoint p;
  p.z = ComplexVector(2);
  p.z << Complex(0.2, 0.1), Complex(-0.05, 0.1);
  CHECK(series_vs_point(c, p, 6) <= std::pow(2.0, -6) + 1e-10);
}

TEST_CASE("adjoint co-invariance of the symmetric subspace is structural") {
  const RowOperator c = random_commuting_row_contraction(34, 2, 3, 0.9);
  CHECK(verify_invariance(c, 3) < 1e-12);
  // Adjoints of right creations keep symmetrized vectors symmetrized, so
  // the residual stays at roundoff even without commutativity; the
  // commutativity precondition is still enforced by default.
  const RowOperator generic = random_row_contraction(35, 2, 2, 0.9);
  CHECK(verify_invariance(generic, 3, false) < 1e-12);
  CHECK_THROWS_AS(verify_invariance(generic, 3), NotCommuting);
}

TEST_CASE("compression rejects noncommuting tuples") {
  const RowOperator generic = random_row_contraction(36, 2, 2, 0.9);
  bool threw = false;
  try {
    constrained_char_fun(generic, 3);
  } catch (const NotCommuting& e) {
    threw = true;
    CHECK(e.commutator_norm > 1e-10);
  }
  CHECK(threw);
}

TEST_CASE("commuting generators stay commuting through assembly") {
  const UpperTriangularPair pair = random_commuting_pair(37, 2, 2, 2, 0.9);
  CHECK(is_commuting(pair.a));
  CHECK(is_commuting(pair.b));
  const RowOperator t = assemble_T(pair);
  CHECK(max_commutator_norm(t) < 1e-10);
  CHECK(is_row_contraction(t));
}

TEST_CASE("pointwise factorization holds on sampled ball points") {
  const UpperTriangularPair pair = random_commuting_pair(38, 2, 2, 2, 0.9);
  const std::vector<BallPoint> points = ball_sample_points(2, 5);
  const ConstrainedCertificate cert =
      verify_constrained_factorization(pair, points, 1e-8);
  REQUIRE(cert.residuals.size() == 5);
  CHECK(cert.max_residual <= 1e-8);
  CHECK(cert.pass);
}

TEST_CASE("sample schedules are deterministic and stay inside their radii") {
  const std::vector<BallPoint> s1 = series_sample_points(2, 5);
  const std::vector<BallPoint> s2 = series_sample_points(2, 5);
  REQUIRE(s1.size() == 5);
  for (std::size_t i = 0; i < s1.size(); ++i) {
    CHECK((s1[i].z - s2[i].z).norm() == 0.0);
    CHECK(s1[i].z.cwiseAbs().sum() <= 0.45 + 1e-12);
    CHECK(s1[i].z.norm() > 0.0);
  }
  const std::vector<BallPoint> b1 = ball_sample_points(3, 7);
  REQUIRE(b1.size() == 7);
  for (const BallPoint& p : b1) {
    CHECK(p.z.norm() <= 0.95 + 1e-12);
    CHECK(p.z.size() == 3);
  }
}

}  // TEST_SUITE
