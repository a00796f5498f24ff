#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "qsuggest/embedding.hpp"
#include "qsuggest/preprocess.hpp"
#include "qsuggest/vectorspace.hpp"

namespace qsuggest {

// One corpus entry with every derived representation precomputed.
struct Question {
  std::string id;
  std::string text;                             // the scored text field
  std::map<std::string, std::string> metadata;  // carried through, never scored
  AnalyzedText analyzed;
  TermFrequencyVector tf;
  DocumentEmbedding embedding;
  std::size_t oov_count = 0;

  // Nothing survived preprocessing; scores 0 under both systems.
  bool degenerate() const noexcept { return analyzed.stems.empty(); }
  // Had terms, but the embedder knew none of them.
  bool all_oov() const noexcept { return !analyzed.terms.empty() && embedding.is_zero(); }

  friend bool operator==(const Question&, const Question&) = default;
};

// Immutable collection scored against at query time. Built once by ingestion
// or loaded from disk; the fingerprint covers every field below.
class QuestionIndex {
 public:
  // Validates ids (non-empty, unique) and embedding dimensions.
  QuestionIndex(std::vector<Question> questions, PreprocessConfig config, std::string provider_id,
                std::size_t embedding_dimension);

  std::span<const Question> questions() const noexcept { return questions_; }
  std::size_t size() const noexcept { return questions_.size(); }
  bool empty() const noexcept { return questions_.empty(); }

  const Question* find(std::string_view id) const;
  // Throws LookupError naming the id.
  const Question& at(std::string_view id) const;

  const PreprocessConfig& preprocess_config() const noexcept { return config_; }
  const std::string& preprocess_fingerprint() const noexcept { return preprocess_fingerprint_; }
  const std::string& provider_id() const noexcept { return provider_id_; }
  std::size_t embedding_dimension() const noexcept { return embedding_dimension_; }
  std::size_t vocabulary_size() const noexcept { return vocabulary_size_; }
  const std::string& fingerprint() const noexcept { return fingerprint_; }

  std::size_t degenerate_count() const;
  std::size_t all_oov_count() const;
  std::size_t oov_token_count() const;

 private:
  std::vector<Question> questions_;
  std::unordered_map<std::string, std::size_t> by_id_;
  PreprocessConfig config_;
  std::string preprocess_fingerprint_;
  std::string provider_id_;
  std::size_t embedding_dimension_;
  std::size_t vocabulary_size_ = 0;
  std::string fingerprint_;
};

}  // namespace qsuggest
