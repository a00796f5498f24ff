#include <algorithm>
#include <cmath>
#include <numbers>

#include "qsuggest/embedding.hpp"
#include "qsuggest/errors.hpp"

namespace qsuggest {

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

HashEmbedder::HashEmbedder(std::size_t dimension, std::uint64_t seed)
    : dimension_(dimension), seed_(seed) {
  if (dimension_ == 0) throw InputError("hash embedder dimension must be at least 1");
}

std::string HashEmbedder::id() const {
  return "hash-v1:dim=" + std::to_string(dimension_) + ":seed=" + std::to_string(seed_);
}

std::vector<double> HashEmbedder::word_vector(std::string_view word) const {
  std::uint64_t seed_state = seed_;
  std::uint64_t state = fnv1a64(word) ^ splitmix64(seed_state);
  auto uniform = [&state] {
    return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
  };

  std::vector<double> v(dimension_);
  for (std::size_t i = 0; i < dimension_; i += 2) {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    v[i] = r * std::cos(theta);
    if (i + 1 < dimension_) v[i + 1] = r * std::sin(theta);
  }
  double sq = 0.0;
  for (double x : v) sq += x * x;
  if (sq == 0.0) {
    v[0] = 1.0;
    return v;
  }
  const double n = std::sqrt(sq);
  for (auto& x : v) x /= n;
  return v;
}

DocumentEmbedding HashEmbedder::embed(const TokenList& terms) const {
  if (terms.empty()) return DocumentEmbedding::zero(dimension_);
  TokenList sorted = terms;
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> sum(dimension_, 0.0);
  for (const auto& t : sorted) {
    const auto w = word_vector(t);
    for (std::size_t i = 0; i < dimension_; ++i) sum[i] += w[i];
  }
  for (auto& x : sum) x /= static_cast<double>(sorted.size());
  return DocumentEmbedding(std::move(sum));
}

std::shared_ptr<const EmbeddingProvider> hash_embedder(std::size_t dimension, std::uint64_t seed) {
  return std::make_shared<const HashEmbedder>(dimension, seed);
}

}  // namespace qsuggest
