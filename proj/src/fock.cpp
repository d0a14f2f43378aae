#include "charfact/fock.hpp"

#include <algorithm>

namespace charfact {

Word Word::reversed() const {
  Word out = *this;
  std::reverse(out.letters.begin(), out.letters.end());
  return out;
}

std::string Word::to_string() const {
  std::string out;
  out.reserve(letters.size());
  for (int l : letters) out += static_cast<char>('0' + l);
  return out;
}

Word parse_word(const std::string& digits) {
  Word w;
  w.letters.reserve(digits.size());
  for (char c : digits) {
    if (c < '1' || c > '9') {
      throw ParseError("word must be a string of digits 1-9, got '" + digits + "'");
    }
    w.letters.push_back(c - '0');
  }
  return w;
}

FockBasis::FockBasis(int n, int k) : n_(n), k_(k) {
  if (n < 1 || n > 9) {
    throw DimensionMismatch("alphabet size must be in 1..9");
  }
  if (k < 0) throw DimensionMismatch("truncation must be nonnegative");
  offsets_.assign(static_cast<size_t>(k) + 2, 0);
  Eigen::Index level = 1;
  for (int m = 0; m <= k; ++m) {
    offsets_[static_cast<size_t>(m) + 1] = offsets_[static_cast<size_t>(m)] + level;
    level *= n;
  }
}

Eigen::Index FockBasis::degree_offset(int length) const {
  if (length < 0 || length > k_) {
    throw WordTooLong("degree " + std::to_string(length) + " outside truncation");
  }
  return offsets_[static_cast<size_t>(length)];
}

Eigen::Index FockBasis::degree_dim(int length) const {
  degree_offset(length);  // range check
  return offsets_[static_cast<size_t>(length) + 1] -
         offsets_[static_cast<size_t>(length)];
}

Eigen::Index FockBasis::index_of(const Word& w) const {
  if (w.length() > k_) {
    throw WordTooLong("word '" + w.to_string() + "' exceeds truncation " +
                      std::to_string(k_));
  }
  Eigen::Index value = 0;
  for (int letter : w.letters) {
    if (letter < 1 || letter > n_) {
      throw DimensionMismatch("letter " + std::to_string(letter) +
                              " outside alphabet 1.." + std::to_string(n_));
    }
    value = value * n_ + (letter - 1);
  }
  return offsets_[static_cast<size_t>(w.length())] + value;
}

Word FockBasis::word_at(Eigen::Index index) const {
  if (index < 0 || index >= dim()) {
    throw DimensionMismatch("basis index out of range");
  }
  int length = 0;
  while (offsets_[static_cast<size_t>(length) + 1] <= index) ++length;
  Eigen::Index value = index - offsets_[static_cast<size_t>(length)];
  Word w;
  w.letters.assign(static_cast<size_t>(length), 1);
  for (int pos = length - 1; pos >= 0; --pos) {
    w.letters[static_cast<size_t>(pos)] = static_cast<int>(value % n_) + 1;
    value /= n_;
  }
  return w;
}

std::vector<Word> enumerate_words(int n, int k) {
  FockBasis basis(n, k);
  std::vector<Word> words;
  words.reserve(static_cast<size_t>(basis.dim()));
  for (Eigen::Index i = 0; i < basis.dim(); ++i) words.push_back(basis.word_at(i));
  return words;
}

ComplexMatrix left_creation(const FockBasis& basis, int j) {
  if (j < 1 || j > basis.alphabet()) {
    throw DimensionMismatch("creation index outside alphabet");
  }
  ComplexMatrix m = ComplexMatrix::Zero(basis.dim(), basis.dim());
  for (Eigen::Index i = 0; i < basis.dim(); ++i) {
    Word w = basis.word_at(i);
    if (w.length() >= basis.truncation()) continue;
    w.letters.insert(w.letters.begin(), j);
    m(basis.index_of(w), i) = 1.0;
  }
  return m;
}

ComplexMatrix right_creation(const FockBasis& basis, int j) {
  if (j < 1 || j > basis.alphabet()) {
    throw DimensionMismatch("creation index outside alphabet");
  }
  ComplexMatrix m = ComplexMatrix::Zero(basis.dim(), basis.dim());
  for (Eigen::Index i = 0; i < basis.dim(); ++i) {
    Word w = basis.word_at(i);
    if (w.length() >= basis.truncation()) continue;
    w.letters.push_back(j);
    m(basis.index_of(w), i) = 1.0;
  }
  return m;
}

ComplexMatrix flip(const FockBasis& basis) {
  ComplexMatrix m = ComplexMatrix::Zero(basis.dim(), basis.dim());
  for (Eigen::Index i = 0; i < basis.dim(); ++i) {
    m(basis.index_of(basis.word_at(i).reversed()), i) = 1.0;
  }
  return m;
}

ComplexMatrix word_operator(const Word& word,
                            const std::vector<ComplexMatrix>& generators) {
  if (generators.empty()) {
    throw DimensionMismatch("word_operator needs at least one generator");
  }
  const Eigen::Index dim = generators.front().rows();
  for (const auto& g : generators) {
    if (g.rows() != dim || g.cols() != dim) {
      throw DimensionMismatch("generators must be square and equally sized");
    }
  }
  ComplexMatrix out = ComplexMatrix::Identity(dim, dim);
  for (int letter : word.letters) {
    if (letter < 1 || letter > static_cast<int>(generators.size())) {
      throw DimensionMismatch("word letter outside generator range");
    }
    out = out * generators[static_cast<size_t>(letter - 1)];
  }
  return out;
}

}  // namespace charfact
