#pragma once

#include <stdexcept>
#include <string>

namespace charfact {

// Base of every mathematical-precondition failure raised by the toolkit.
// Malformed *input files* raise ParseError instead; the CLI maps Error to
// exit code 1 and ParseError to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotHermitian : public Error {
 public:
  using Error::Error;
};

class NotPSD : public Error {
 public:
  using Error::Error;
};

class NotAContraction : public Error {
 public:
  using Error::Error;
};

class NotContractive : public Error {
 public:
  using Error::Error;
};

class NotFactorable : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NotUnitary : public Error {
 public:
  using Error::Error;
};

class WordTooLong : public Error {
 public:
  using Error::Error;
};

class NotCommuting : public Error {
 public:
  NotCommuting(const std::string& what, double commutator_norm)
      : Error(what), commutator_norm(commutator_norm) {}
  explicit NotCommuting(const std::string& what) : Error(what) {}
  double commutator_norm = 0.0;
};

class OutsideBall : public Error {
 public:
  using Error::Error;
};

class SamplingRestriction : public Error {
 public:
  using Error::Error;
};

// Carries the dimensions of the surviving slices so callers can report which
// side obstructed the construction.
class NotPurelyContractive : public Error {
 public:
  NotPurelyContractive(const std::string& what, long f_prime_dim,
                       long f_star_prime_dim)
      : Error(what),
        f_prime_dim(f_prime_dim),
        f_star_prime_dim(f_star_prime_dim) {}
  explicit NotPurelyContractive(const std::string& what) : Error(what) {}
  long f_prime_dim = 0;
  long f_star_prime_dim = 0;
};

class RankDeficiencyWarning : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace charfact
