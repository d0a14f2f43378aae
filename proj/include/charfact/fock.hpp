#pragma once

#include <string>
#include <vector>

#include "charfact/matkit.hpp"

namespace charfact {

// A word over the alphabet {1, ..., n}. The empty word is legal and denotes
// the vacuum. Ordering is graded-lexicographic (length first, then letters),
// matching the basis index order of FockBasis.
struct Word {
  std::vector<int> letters;

  Word() = default;
  explicit Word(std::vector<int> ls) : letters(std::move(ls)) {}

  int length() const { return static_cast<int>(letters.size()); }
  bool empty() const { return letters.empty(); }
  Word reversed() const;
  std::string to_string() const;  // digit string, "" for the empty word

  friend bool operator==(const Word& a, const Word& b) {
    return a.letters == b.letters;
  }
  friend bool operator<(const Word& a, const Word& b) {
    if (a.letters.size() != b.letters.size()) {
      return a.letters.size() < b.letters.size();
    }
    return a.letters < b.letters;
  }
};

Word parse_word(const std::string& digits);

// Orthonormal basis {e_alpha : |alpha| <= k} of the full Fock space over C^n
// truncated at word length k. Index 0 is the vacuum e_{}, then words in
// graded-lexicographic order: for n = 2, k = 2 the order is
// {}, 1, 2, 11, 12, 21, 22.
class FockBasis {
 public:
  FockBasis() : FockBasis(1, 0) {}
  FockBasis(int n, int k);

  int alphabet() const { return n_; }
  int truncation() const { return k_; }
  Eigen::Index dim() const { return offsets_[static_cast<size_t>(k_) + 1]; }

  Eigen::Index degree_offset(int length) const;  // index of first word of that length
  Eigen::Index degree_dim(int length) const;     // n^length

  Eigen::Index index_of(const Word& w) const;
  Word word_at(Eigen::Index index) const;

 private:
  int n_ = 1;
  int k_ = 0;
  std::vector<Eigen::Index> offsets_;  // offsets_[m] = #words shorter than m
};

std::vector<Word> enumerate_words(int n, int k);

// Truncated creation operators on FockBasis(n, k): matrices of size
// dim x dim. Words of length k are sent to zero (the truncation boundary),
// which is what makes degree-raising operators nilpotent of order k+1.
ComplexMatrix left_creation(const FockBasis& basis, int j);   // e_a -> e_{ja}
ComplexMatrix right_creation(const FockBasis& basis, int j);  // e_a -> e_{aj}

// Unitary word reversal e_alpha -> e_{reversed(alpha)}; conjugates left
// creations into right creations.
ComplexMatrix flip(const FockBasis& basis);

// Ordered product gen[a_1] * gen[a_2] * ... * gen[a_m] for word a; the empty
// word gives the identity. For right creations this realizes
// R_alpha e_beta = e_{beta * reversed(alpha)}.
ComplexMatrix word_operator(const Word& word,
                            const std::vector<ComplexMatrix>& generators);

}  // namespace charfact
