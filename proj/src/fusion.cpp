#include "qsuggest/fusion.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>

#include "qsuggest/errors.hpp"

namespace qsuggest {
namespace {

std::atomic<std::uint64_t> g_candidate_evaluations{0};

CandidateScores score_one(const EncodedQuery& query, const Question& q) {
  return CandidateScores{q.id, cosine_tf(query.tf, q.tf), cosine_semantic(query.embedding, q.embedding)};
}

}  // namespace

Lambda::Lambda(double value) : value_(value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw ContractViolation("lambda must lie in [0, 1], got " + std::to_string(value));
  }
}

double combine(double s1, double s2, Lambda lambda) {
  const double l = lambda.value();
  return std::min(1.0, l * s1 + (1.0 - l) * s2);
}

Cutoff Cutoff::top_k(std::size_t k) {
  if (k == 0) throw ContractViolation("top-k cutoff needs k >= 1");
  Cutoff c;
  c.kind = Kind::top_k;
  c.k = k;
  return c;
}

Cutoff Cutoff::at_least(double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) {
    throw ContractViolation("threshold must lie in [0, 1], got " + std::to_string(tau));
  }
  Cutoff c;
  c.kind = Kind::threshold;
  c.threshold = tau;
  return c;
}

std::string Cutoff::describe() const {
  std::ostringstream out;
  switch (kind) {
    case Kind::none:
      return "none";
    case Kind::top_k:
      out << "top_k(" << k << ")";
      break;
    case Kind::threshold:
      out << "threshold(" << threshold << ")";
      break;
  }
  return out.str();
}

std::vector<CandidateScores> score_candidates(const EncodedQuery& query,
                                              std::span<const std::string> ids,
                                              const QuestionIndex& index) {
  std::vector<CandidateScores> out;
  out.reserve(ids.size());
  for (const auto& id : ids) out.push_back(score_one(query, index.at(id)));
  g_candidate_evaluations.fetch_add(out.size(), std::memory_order_relaxed);
  return out;
}

std::vector<CandidateScores> score_all(const EncodedQuery& query, const QuestionIndex& index) {
  std::vector<CandidateScores> out;
  out.reserve(index.size());
  for (const auto& q : index.questions()) out.push_back(score_one(query, q));
  g_candidate_evaluations.fetch_add(out.size(), std::memory_order_relaxed);
  return out;
}

SuggestionResult rank_scored(std::string query_text, std::span<const CandidateScores> scores,
                             Lambda lambda) {
  SuggestionResult result;
  result.query_text = std::move(query_text);
  result.lambda_used = lambda;
  result.candidates.reserve(scores.size());
  for (const auto& s : scores) {
    result.candidates.push_back(ScoredCandidate{s.question_id, s.s1, s.s2, combine(s.s1, s.s2, lambda), 0});
  }
  std::sort(result.candidates.begin(), result.candidates.end(),
            [](const ScoredCandidate& a, const ScoredCandidate& b) {
              if (a.combined != b.combined) return a.combined > b.combined;
              return a.question_id < b.question_id;
            });
  for (std::size_t i = 0; i < result.candidates.size(); ++i) result.candidates[i].rank = i + 1;
  return result;
}

SuggestionResult rank_candidates(const EncodedQuery& query, std::span<const std::string> ids,
                                 const QuestionIndex& index, Lambda lambda) {
  const auto scores = score_candidates(query, ids, index);
  return rank_scored(query.text, scores, lambda);
}

SuggestionResult rank_all(const EncodedQuery& query, const QuestionIndex& index, Lambda lambda) {
  const auto scores = score_all(query, index);
  return rank_scored(query.text, scores, lambda);
}

SuggestionResult apply_cutoff(SuggestionResult result, Cutoff cutoff) {
  auto& c = result.candidates;
  switch (cutoff.kind) {
    case Cutoff::Kind::none:
      break;
    case Cutoff::Kind::top_k:
      if (c.size() > cutoff.k) c.resize(cutoff.k);
      break;
    case Cutoff::Kind::threshold: {
      const auto first_below = std::find_if(c.begin(), c.end(), [&](const ScoredCandidate& s) {
        return s.combined < cutoff.threshold;
      });
      c.erase(first_below, c.end());
      break;
    }
  }
  result.cutoff = cutoff;
  return result;
}

std::uint64_t candidate_evaluations() noexcept {
  return g_candidate_evaluations.load(std::memory_order_relaxed);
}

}  // namespace qsuggest
