#pragma once

#include <cstdint>
#include <random>

#include "charfact/matkit.hpp"

namespace charfact {

// Deterministic sampling used by generators and self-test suites. Gaussians
// are produced by an explicit Box-Muller transform over 53-bit uniforms so
// the stream does not depend on the standard library's distribution
// implementation — identical seeds give identical bytes everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform();  // [0, 1)
  double gaussian();
  Complex gaussian_complex();  // E|z|^2 = 1
  std::uint64_t integer(std::uint64_t bound);  // [0, bound)

  ComplexMatrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols);

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Gaussian matrix rescaled so its operator norm is exactly `norm`.
ComplexMatrix random_contraction(Rng& rng, Eigen::Index rows, Eigen::Index cols,
                                 double norm);

// Haar-distributed unitary (QR of a Gaussian matrix with the R-diagonal
// phases absorbed).
ComplexMatrix random_unitary(Rng& rng, Eigen::Index size);

}  // namespace charfact
