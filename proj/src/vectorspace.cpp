#include "qsuggest/vectorspace.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace qsuggest {

TermFrequencyVector::TermFrequencyVector(std::vector<Entry> entries) {
  std::map<std::string, std::uint64_t> merged;
  for (auto& [term, n] : entries) {
    if (n > 0) merged[std::move(term)] += n;
  }
  entries_.reserve(merged.size());
  for (auto& [term, n] : merged) {
    entries_.emplace_back(term, static_cast<std::uint32_t>(n));
    squared_norm_ += n * n;
  }
  norm_ = std::sqrt(static_cast<double>(squared_norm_));
}

std::uint32_t TermFrequencyVector::count(std::string_view term) const {
  const auto it = std::lower_bound(entries_.begin(), entries_.end(), term,
                                   [](const Entry& e, std::string_view t) { return e.first < t; });
  return (it != entries_.end() && it->first == term) ? it->second : 0;
}

TermFrequencyVector tf_vectorize(const TokenList& tokens) {
  std::vector<TermFrequencyVector::Entry> entries;
  entries.reserve(tokens.size());
  for (const auto& t : tokens) entries.emplace_back(t, 1);
  return TermFrequencyVector(std::move(entries));
}

std::uint64_t dot(const TermFrequencyVector& a, const TermFrequencyVector& b) {
  std::uint64_t sum = 0;
  auto ia = a.entries().begin();
  auto ib = b.entries().begin();
  while (ia != a.entries().end() && ib != b.entries().end()) {
    const int c = ia->first.compare(ib->first);
    if (c < 0) {
      ++ia;
    } else if (c > 0) {
      ++ib;
    } else {
      sum += std::uint64_t{ia->second} * ib->second;
      ++ia;
      ++ib;
    }
  }
  return sum;
}

double cosine_tf(const TermFrequencyVector& a, const TermFrequencyVector& b) {
  if (a.squared_norm() == 0 || b.squared_norm() == 0) return 0.0;
  // sqrt(na * nb) rather than norm(a) * norm(b): for a == b the product is a
  // perfect square and the quotient is exactly 1.
  const double denom =
      std::sqrt(static_cast<double>(a.squared_norm()) * static_cast<double>(b.squared_norm()));
  return std::min(1.0, static_cast<double>(dot(a, b)) / denom);
}

}  // namespace qsuggest
