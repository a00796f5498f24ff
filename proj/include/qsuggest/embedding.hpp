#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "qsuggest/preprocess.hpp"

namespace qsuggest {

// Dense document vector. Components are finite; `is_zero()` is derived from
// them rather than stored.
class DocumentEmbedding {
 public:
  DocumentEmbedding() = default;
  explicit DocumentEmbedding(std::vector<double> values);
  static DocumentEmbedding zero(std::size_t dimension);

  std::span<const double> values() const noexcept { return values_; }
  std::size_t dimension() const noexcept { return values_.size(); }
  bool is_zero() const noexcept { return is_zero_; }
  double squared_norm() const noexcept { return squared_norm_; }

  friend bool operator==(const DocumentEmbedding& a, const DocumentEmbedding& b) {
    return a.values_ == b.values_;
  }

 private:
  std::vector<double> values_;
  double squared_norm_ = 0.0;
  bool is_zero_ = true;
};

// Raw cosine clamped to [0, 1]. Zero embeddings score 0 against anything.
// Throws ContractViolation on a dimension mismatch.
double cosine_semantic(const DocumentEmbedding& a, const DocumentEmbedding& b);

// Words mapped to fixed-dimension vectors, in file order.
class WordVectorTable {
 public:
  WordVectorTable(std::size_t dimension, std::string source_id);

  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t size() const noexcept { return vectors_.size(); }
  const std::string& source_id() const noexcept { return source_id_; }

  // Returns false (and keeps the existing vector) if the word is already present.
  bool insert(std::string word, std::vector<double> vector);
  const std::vector<double>* find(std::string_view word) const;
  const std::vector<std::string>& words() const noexcept { return order_; }

 private:
  std::size_t dimension_;
  std::string source_id_;
  std::unordered_map<std::string, std::vector<double>> vectors_;
  std::vector<std::string> order_;
};

// Reads the word2vec text format: a "<count> <dimension>" header followed by
// "<word> <c1> ... <cd>" lines. Keeps at most `limit` entries; a repeated word
// keeps its first vector. Errors name the 1-based line number.
WordVectorTable load_word_vectors(const std::filesystem::path& path,
                                  std::optional<std::size_t> limit = std::nullopt);

// Component-wise mean over in-vocabulary tokens; zero if none are known.
DocumentEmbedding embed_mean(const TokenList& tokens, const WordVectorTable& table);

// Maps analyzed terms to a document embedding. Implementations are immutable
// and embed() is a pure function of its input.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  virtual std::size_t dimension() const = 0;
  // Stable identifier stored in indexes, e.g. "hash-v1:dim=64:seed=7".
  virtual std::string id() const = 0;
  virtual DocumentEmbedding embed(const TokenList& terms) const = 0;
  // Tokens the provider had no vector for.
  virtual std::size_t count_oov(const TokenList& terms) const { (void)terms; return 0; }
};

// Mean of pre-trained word vectors.
class WordVectorProvider final : public EmbeddingProvider {
 public:
  explicit WordVectorProvider(std::shared_ptr<const WordVectorTable> table);

  std::size_t dimension() const override { return table_->dimension(); }
  std::string id() const override;
  DocumentEmbedding embed(const TokenList& terms) const override;
  std::size_t count_oov(const TokenList& terms) const override;

  const WordVectorTable& table() const noexcept { return *table_; }

 private:
  std::shared_ptr<const WordVectorTable> table_;
};

// Deterministic embedder for hermetic runs. Each word gets a pseudo-random
// unit vector and a document is the mean of its word vectors.
//
// Word vector derivation (stable across processes and platforms):
//   state  = fnv1a64(utf8 bytes of word) XOR splitmix64(seed)
//   draw i = splitmix64 step on state (state += 0x9E3779B97F4A7C15, then mix)
//   u      = (draw >> 11) * 2^-53, mapped to (0, 1] as 1 - u for the log term
//   pairs of uniforms (u1, u2) feed Box-Muller:
//     g0 = sqrt(-2 ln u1) cos(2 pi u2), g1 = sqrt(-2 ln u1) sin(2 pi u2)
//   the Gaussian vector is scaled to unit Euclidean norm.
class HashEmbedder final : public EmbeddingProvider {
 public:
  HashEmbedder(std::size_t dimension, std::uint64_t seed);

  std::size_t dimension() const override { return dimension_; }
  std::string id() const override;
  DocumentEmbedding embed(const TokenList& terms) const override;

  std::vector<double> word_vector(std::string_view word) const;
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::size_t dimension_;
  std::uint64_t seed_;
};

std::shared_ptr<const EmbeddingProvider> hash_embedder(std::size_t dimension, std::uint64_t seed);

std::uint64_t fnv1a64(std::string_view bytes) noexcept;
std::uint64_t splitmix64(std::uint64_t& state) noexcept;

}  // namespace qsuggest
