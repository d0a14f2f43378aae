#include "charfact/random.hpp"

#include <Eigen/QR>
#include <cmath>

namespace charfact {

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1], keeps the log finite
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * M_PI * u2;
  spare_ = radius * std::sin(angle);
  have_spare_ = true;
  return radius * std::cos(angle);
}

Complex Rng::gaussian_complex() {
  const double re = gaussian();
  const double im = gaussian();
  return Complex(re, im) / std::sqrt(2.0);
}

std::uint64_t Rng::integer(std::uint64_t bound) {
  return bound == 0 ? 0 : engine_() % bound;
}

ComplexMatrix Rng::gaussian_matrix(Eigen::Index rows, Eigen::Index cols) {
  ComplexMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = gaussian_complex();
  }
  return m;
}

ComplexMatrix random_contraction(Rng& rng, Eigen::Index rows, Eigen::Index cols,
                                 double norm) {
  if (rows == 0 || cols == 0) return ComplexMatrix(rows, cols);
  ComplexMatrix m = rng.gaussian_matrix(rows, cols);
  const double current = operator_norm(m);
  if (current > 0.0) m *= norm / current;
  return m;
}

ComplexMatrix random_unitary(Rng& rng, Eigen::Index size) {
  if (size == 0) return ComplexMatrix(0, 0);
  const ComplexMatrix g = rng.gaussian_matrix(size, size);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < size; ++i) {
    const Complex d = r(i, i);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(i) *= d / mag;
  }
  return q;
}

}  // namespace charfact
