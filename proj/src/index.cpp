#include "qsuggest/index.hpp"

#include <set>

#include "qsuggest/errors.hpp"
#include "qsuggest/fingerprint.hpp"

namespace qsuggest {
namespace {

void hash_tokens(Sha256& h, const TokenList& tokens) {
  h.field(std::uint64_t{tokens.size()});
  for (const auto& t : tokens) h.field(t);
}

std::string compute_fingerprint(std::span<const Question> questions, const std::string& preprocess_fp,
                                const std::string& provider_id, std::size_t dimension,
                                std::size_t vocabulary) {
  Sha256 h;
  h.field(std::string_view("qsuggest-index/v1"));
  h.field(preprocess_fp);
  h.field(provider_id);
  h.field(std::uint64_t{dimension});
  h.field(std::uint64_t{vocabulary});
  h.field(std::uint64_t{questions.size()});
  for (const auto& q : questions) {
    h.field(q.id);
    h.field(q.text);
    h.field(std::uint64_t{q.metadata.size()});
    for (const auto& [k, v] : q.metadata) {
      h.field(k);
      h.field(v);
    }
    hash_tokens(h, q.analyzed.terms);
    hash_tokens(h, q.analyzed.stems);
    h.field(std::uint64_t{q.tf.size()});
    for (const auto& [term, n] : q.tf.entries()) {
      h.field(term);
      h.field(std::uint64_t{n});
    }
    h.field(q.embedding.values());
    h.field(std::uint64_t{q.oov_count});
  }
  return h.hex_digest();
}

}  // namespace

QuestionIndex::QuestionIndex(std::vector<Question> questions, PreprocessConfig config,
                             std::string provider_id, std::size_t embedding_dimension)
    : questions_(std::move(questions)),
      config_(std::move(config)),
      preprocess_fingerprint_(config_.fingerprint()),
      provider_id_(std::move(provider_id)),
      embedding_dimension_(embedding_dimension) {
  std::set<std::string_view> vocabulary;
  by_id_.reserve(questions_.size());
  for (std::size_t i = 0; i < questions_.size(); ++i) {
    const auto& q = questions_[i];
    if (q.id.empty()) throw InputError("question at position " + std::to_string(i + 1) + " has an empty id");
    if (!by_id_.emplace(q.id, i).second) throw InputError("duplicate question id '" + q.id + "'");
    if (q.embedding.dimension() != embedding_dimension_) {
      throw ContractViolation("question '" + q.id + "' embedding has dimension " +
                              std::to_string(q.embedding.dimension()) + ", index expects " +
                              std::to_string(embedding_dimension_));
    }
    for (const auto& [term, n] : q.tf.entries()) vocabulary.insert(term);
  }
  vocabulary_size_ = vocabulary.size();
  fingerprint_ = compute_fingerprint(questions_, preprocess_fingerprint_, provider_id_,
                                     embedding_dimension_, vocabulary_size_);
}

const Question* QuestionIndex::find(std::string_view id) const {
  const auto it = by_id_.find(std::string(id));
  return it == by_id_.end() ? nullptr : &questions_[it->second];
}

const Question& QuestionIndex::at(std::string_view id) const {
  const auto* q = find(id);
  if (q == nullptr) throw LookupError("unknown question id '" + std::string(id) + "'");
  return *q;
}

std::size_t QuestionIndex::degenerate_count() const {
  std::size_t n = 0;
  for (const auto& q : questions_) n += q.degenerate() ? 1 : 0;
  return n;
}

std::size_t QuestionIndex::all_oov_count() const {
  std::size_t n = 0;
  for (const auto& q : questions_) n += q.all_oov() ? 1 : 0;
  return n;
}

std::size_t QuestionIndex::oov_token_count() const {
  std::size_t n = 0;
  for (const auto& q : questions_) n += q.oov_count;
  return n;
}

}  // namespace qsuggest
