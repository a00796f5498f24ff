#include "qsuggest/context.hpp"

#include <charconv>

#include "qsuggest/errors.hpp"

namespace qsuggest {
namespace {

template <typename T>
bool parse_uint(std::string_view s, T& out) {
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace

EncodedQuery encode_text(std::string_view text, const PreprocessConfig& config,
                         const EmbeddingProvider& provider) {
  EncodedQuery q;
  q.text = std::string(text);
  q.analyzed = analyze(text, config);
  q.tf = tf_vectorize(q.analyzed.stems);
  q.embedding = provider.embed(q.analyzed.terms);
  return q;
}

SearchContext::SearchContext(std::shared_ptr<const QuestionIndex> index,
                             std::shared_ptr<const EmbeddingProvider> provider)
    : index_(std::move(index)), provider_(std::move(provider)) {
  if (!index_ || !provider_) throw ContractViolation("search context needs an index and a provider");
  if (provider_->id() != index_->provider_id()) {
    throw InputError("embedding provider '" + provider_->id() + "' does not match the index's provider '" +
                     index_->provider_id() + "'");
  }
  if (provider_->dimension() != index_->embedding_dimension()) {
    throw InputError("embedding provider dimension " + std::to_string(provider_->dimension()) +
                     " does not match index dimension " + std::to_string(index_->embedding_dimension()));
  }
}

EncodedQuery SearchContext::encode(std::string_view text) const {
  return encode_text(text, index_->preprocess_config(), *provider_);
}

std::optional<HashProviderSpec> parse_hash_provider_id(std::string_view id) {
  constexpr std::string_view prefix = "hash-v1:dim=";
  if (!id.starts_with(prefix)) return std::nullopt;
  id.remove_prefix(prefix.size());
  const auto sep = id.find(":seed=");
  if (sep == std::string_view::npos) return std::nullopt;
  HashProviderSpec spec{};
  if (!parse_uint(id.substr(0, sep), spec.dimension) ||
      !parse_uint(id.substr(sep + 6), spec.seed) || spec.dimension == 0) {
    return std::nullopt;
  }
  return spec;
}

std::shared_ptr<const EmbeddingProvider> provider_for_index(
    const QuestionIndex& index, const std::optional<std::filesystem::path>& word_vectors) {
  const auto& id = index.provider_id();
  if (const auto spec = parse_hash_provider_id(id)) {
    return hash_embedder(spec->dimension, spec->seed);
  }
  if (id.starts_with("wordvec:")) {
    if (!word_vectors) {
      throw InputError("index was built with word vectors; pass --word-vectors to load them");
    }
    // The limit, if any, is part of the source id.
    std::optional<std::size_t> limit;
    if (const auto pos = id.find(";limit="); pos != std::string::npos) {
      std::size_t n = 0;
      if (!parse_uint(std::string_view(id).substr(pos + 7), n)) {
        throw InputError("malformed provider id '" + id + "'");
      }
      limit = n;
    }
    auto table = std::make_shared<const WordVectorTable>(load_word_vectors(*word_vectors, limit));
    auto provider = std::make_shared<const WordVectorProvider>(std::move(table));
    if (provider->id() != id) {
      throw InputError("word-vector file " + word_vectors->string() +
                       " differs from the one the index was built with");
    }
    return provider;
  }
  throw InputError("index uses an unknown embedding provider '" + id + "'");
}

}  // namespace qsuggest
