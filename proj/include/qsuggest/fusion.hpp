#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qsuggest/context.hpp"
#include "qsuggest/index.hpp"

namespace qsuggest {

// Weight of the syntactic score in the fused score: 1 is purely syntactic,
// 0 purely semantic.
class Lambda {
 public:
  // Throws ContractViolation unless 0 <= value <= 1.
  explicit Lambda(double value);

  static Lambda syntactic() { return Lambda(1.0); }
  static Lambda semantic() { return Lambda(0.0); }

  double value() const noexcept { return value_; }
  friend bool operator==(Lambda, Lambda) = default;

 private:
  double value_;
};

// lambda * s1 + (1 - lambda) * s2. Exact at both endpoints.
double combine(double s1, double s2, Lambda lambda);

// Both standalone scores for one candidate.
struct CandidateScores {
  std::string question_id;
  double s1 = 0.0;
  double s2 = 0.0;
};

struct ScoredCandidate {
  std::string question_id;
  double s1 = 0.0;
  double s2 = 0.0;
  double combined = 0.0;
  std::size_t rank = 0;  // 1 = best

  friend bool operator==(const ScoredCandidate&, const ScoredCandidate&) = default;
};

struct Cutoff {
  enum class Kind { none, top_k, threshold };

  Kind kind = Kind::none;
  std::size_t k = 0;
  double threshold = 0.0;

  static Cutoff none() { return {}; }
  // k >= 1
  static Cutoff top_k(std::size_t k);
  // tau in [0, 1]; inclusive
  static Cutoff at_least(double tau);
  std::string describe() const;
};

struct SuggestionResult {
  std::string query_text;
  std::vector<ScoredCandidate> candidates;  // combined desc, id asc
  Lambda lambda_used = Lambda::semantic();
  Cutoff cutoff;
};

// Scores each listed candidate under both systems. Throws LookupError for an
// unknown id.
std::vector<CandidateScores> score_candidates(const EncodedQuery& query,
                                              std::span<const std::string> ids,
                                              const QuestionIndex& index);
std::vector<CandidateScores> score_all(const EncodedQuery& query, const QuestionIndex& index);

// Fuses precomputed scores, sorts by (combined desc, id asc), assigns ranks 1..n.
SuggestionResult rank_scored(std::string query_text, std::span<const CandidateScores> scores,
                             Lambda lambda);

SuggestionResult rank_candidates(const EncodedQuery& query, std::span<const std::string> ids,
                                 const QuestionIndex& index, Lambda lambda);
SuggestionResult rank_all(const EncodedQuery& query, const QuestionIndex& index, Lambda lambda);

// Keeps ranks 1..k, or candidates with combined >= tau. Order is preserved.
SuggestionResult apply_cutoff(SuggestionResult result, Cutoff cutoff);

// Number of candidates scored by score_candidates()/score_all() in this process.
std::uint64_t candidate_evaluations() noexcept;

}  // namespace qsuggest
