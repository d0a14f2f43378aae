#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "charfact/matkit.hpp"
#include "charfact/rowcon.hpp"

namespace charfact {

// ---------------------------------------------------------------------------
// Instance documents (JSON). Two shapes:
//   single space:  {"n": 2, "spaces": {"h": 3}, "T": [M1, M2], "meta": ...}
//   split spaces:  {"n": 2, "spaces": {"h1": 2, "h2": 3},
//                   "A": [...], "B": [...], "L": M, "w": M, "T": [...]}
// Matrices are arrays of rows; every entry is a [re, im] pair. On a split
// instance "L", "w", and "T" are optional ("T" acts on the direct sum and is
// used to cross-check an assembled tuple against an explicit one). Tuple
// length is capped at 9 so words serialize as digit strings.
// ---------------------------------------------------------------------------
struct Instance {
  int n = 0;
  bool split = false;
  Eigen::Index h = 0;        // single-space dimension (split == false)
  Eigen::Index h1 = 0;       // split dimensions (split == true)
  Eigen::Index h2 = 0;
  std::optional<RowOperator> t;
  std::optional<RowOperator> a;
  std::optional<RowOperator> b;
  std::optional<ComplexMatrix> l;
  std::optional<ComplexMatrix> w;
};

// Both throw ParseError on malformed input (bad JSON, unknown fields,
// ragged arrays, inconsistent dimensions).
Instance parse_instance_text(const std::string& text);
Instance parse_instance_file(const std::string& path);

// A JSON array of sample points, each an array of [re, im] pairs of length
// n: [[[0.1, 0.0], [0.0, 0.2]], ...].
std::vector<ComplexVector> parse_points_text(const std::string& text, int n);
std::vector<ComplexVector> parse_points_file(const std::string& path, int n);

// A JSON array of non-negative integer seeds.
std::vector<std::uint64_t> parse_seeds_file(const std::string& path);

// ---------------------------------------------------------------------------
// Certificates. Serialized as canonical JSON: alphabetically ordered keys,
// compact separators, 17-significant-digit floats — identical certificates
// produce identical bytes.
// ---------------------------------------------------------------------------
struct Certificate {
  std::string theorem;  // one of "2.1", "2.2", "3.1", "3.2", "3.3", "4.x"
  std::map<std::string, double> residuals;
  std::map<std::string, double> tolerances;  // same keys as residuals
  bool pass = false;
  int k = 0;
  std::uint64_t seed = 0;
  // Optional word-keyed coefficient dump (same matrix encoding as instance
  // files); emitted only when include_coefficients is set.
  std::map<std::string, ComplexMatrix> coefficients;
  bool include_coefficients = false;
};

std::string certificate_to_json(const Certificate& cert);

// {"certificates": [...], "pass": bool} with the certificates in the given
// order.
std::string certificates_to_json(const std::vector<Certificate>& certs);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace charfact
