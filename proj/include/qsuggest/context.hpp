#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "qsuggest/embedding.hpp"
#include "qsuggest/index.hpp"
#include "qsuggest/vectorspace.hpp"

namespace qsuggest {

// A query carried through the same pipeline the index was built with.
struct EncodedQuery {
  std::string text;
  AnalyzedText analyzed;
  TermFrequencyVector tf;
  DocumentEmbedding embedding;

  // Nothing survived preprocessing.
  bool degenerate() const noexcept { return analyzed.stems.empty(); }
};

// Encodes one text with an explicit config and provider.
EncodedQuery encode_text(std::string_view text, const PreprocessConfig& config,
                         const EmbeddingProvider& provider);

// An index paired with the embedding provider that built it. Queries are
// preprocessed with the index's own stored configuration.
class SearchContext {
 public:
  // Throws InputError if the provider's id or dimension differs from the index's.
  SearchContext(std::shared_ptr<const QuestionIndex> index,
                std::shared_ptr<const EmbeddingProvider> provider);

  const QuestionIndex& index() const noexcept { return *index_; }
  const EmbeddingProvider& provider() const noexcept { return *provider_; }
  std::shared_ptr<const QuestionIndex> shared_index() const noexcept { return index_; }

  EncodedQuery encode(std::string_view text) const;

 private:
  std::shared_ptr<const QuestionIndex> index_;
  std::shared_ptr<const EmbeddingProvider> provider_;
};

// Parsed form of a hash embedder id ("hash-v1:dim=64:seed=7").
struct HashProviderSpec {
  std::size_t dimension;
  std::uint64_t seed;
};
std::optional<HashProviderSpec> parse_hash_provider_id(std::string_view id);

// Rebuilds the provider an index was ingested with. Hash providers are fully
// described by their id; word-vector providers need the original file, whose
// content hash must match.
std::shared_ptr<const EmbeddingProvider> provider_for_index(
    const QuestionIndex& index, const std::optional<std::filesystem::path>& word_vectors);

}  // namespace qsuggest
