#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qsuggest/preprocess.hpp"

namespace qsuggest {

// Sparse term-frequency vector. Entries are sorted by term and every count is
// at least 1; the squared norm is kept as an exact integer.
class TermFrequencyVector {
 public:
  using Entry = std::pair<std::string, std::uint32_t>;

  TermFrequencyVector() = default;
  // Entries may arrive in any order; duplicate terms are merged, zero counts dropped.
  explicit TermFrequencyVector(std::vector<Entry> entries);

  const std::vector<Entry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  std::uint32_t count(std::string_view term) const;

  std::uint64_t squared_norm() const noexcept { return squared_norm_; }
  double norm() const noexcept { return norm_; }

  friend bool operator==(const TermFrequencyVector& a, const TermFrequencyVector& b) {
    return a.entries_ == b.entries_;
  }

 private:
  std::vector<Entry> entries_;
  std::uint64_t squared_norm_ = 0;
  double norm_ = 0.0;
};

TermFrequencyVector tf_vectorize(const TokenList& tokens);

// Integer dot product over the shared terms (merge join over sorted entries).
std::uint64_t dot(const TermFrequencyVector& a, const TermFrequencyVector& b);

// Cosine of two term-frequency vectors in [0, 1]. A zero vector on either side
// scores 0. Identical non-empty vectors score exactly 1.
double cosine_tf(const TermFrequencyVector& a, const TermFrequencyVector& b);

}  // namespace qsuggest
