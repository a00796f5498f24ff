#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "qsuggest/errors.hpp"
#include "qsuggest/fusion.hpp"
#include "qsuggest/store.hpp"

namespace {

using qsuggest::CandidateScores;
using qsuggest::Cutoff;
using qsuggest::Lambda;
using qsuggest::combine;
using qsuggest::rank_scored;

std::vector<std::string> ids_of(const qsuggest::SuggestionResult& r) {
  std::vector<std::string> out;
  for (const auto& c : r.candidates) out.push_back(c.question_id);
  return out;
}

qsuggest::SuggestionResult five() {
  std::vector<CandidateScores> s = {{"a", 0.9, 0.9}, {"b", 0.7, 0.7}, {"c", 0.5, 0.5}, {"d", 0.3, 0.3}, {"e", 0.1, 0.1}};
  return rank_scored("q", s, Lambda(0.5));
}

TEST(Lambda, Range) {
  EXPECT_NO_THROW(Lambda(0.0));
  EXPECT_NO_THROW(Lambda(1.0));
  EXPECT_THROW(Lambda(-0.01), qsuggest::ContractViolation);
  EXPECT_THROW(Lambda(1.01), qsuggest::ContractViolation);
  EXPECT_THROW(Lambda(std::nan("")), qsuggest::ContractViolation);
}

TEST(Combine, Examples) {
  EXPECT_EQ(combine(0.5, 1.0, Lambda(1.0)), 0.5);
  EXPECT_EQ(combine(0.5, 1.0, Lambda(0.0)), 1.0);
  EXPECT_NEAR(combine(0.5, 1.0, Lambda(0.2)), 0.9, 1e-12);
}

TEST(Combine, EndpointsExactAndMonotone) {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 1000; ++i) {
    const double s1 = u(rng), s2 = u(rng), l = u(rng), bump = u(rng) * (1 - s1);
    EXPECT_EQ(combine(s1, s2, Lambda::syntactic()), s1);
    EXPECT_EQ(combine(s1, s2, Lambda::semantic()), s2);
    const double c = combine(s1, s2, Lambda(l));
    EXPECT_NEAR(c, l * s1 + (1 - l) * s2, 1e-12);
    EXPECT_GE(c, 0.0);
    EXPECT_LE(c, 1.0);
    EXPECT_GE(combine(s1 + bump, s2, Lambda(l)), c);
  }
}

TEST(RankScored, TieBreakById) {
  // combined 0.9, 0.4, 0.4 for ids b, c, a
  std::vector<CandidateScores> s = {{"b", 0.9, 0.9}, {"c", 0.4, 0.4}, {"a", 0.4, 0.4}};
  const auto r = rank_scored("q", s, Lambda(0.5));
  EXPECT_EQ(ids_of(r), (std::vector<std::string>{"b", "a", "c"}));
  EXPECT_EQ(r.candidates[0].rank, 1u);
  EXPECT_EQ(r.candidates[1].rank, 2u);
  EXPECT_EQ(r.candidates[2].rank, 3u);
}

TEST(RankScored, SingleCandidateIsRankOne) {
  std::vector<CandidateScores> s = {{"only", 0.0, 0.0}};
  const auto r = rank_scored("q", s, Lambda(0.3));
  ASSERT_EQ(r.candidates.size(), 1u);
  EXPECT_EQ(r.candidates[0].rank, 1u);
}

TEST(Cutoff, TopK) {
  EXPECT_EQ(ids_of(qsuggest::apply_cutoff(five(), Cutoff::top_k(3))), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(qsuggest::apply_cutoff(five(), Cutoff::top_k(10)).candidates.size(), 5u);
  EXPECT_THROW(Cutoff::top_k(0), qsuggest::ContractViolation);
}

TEST(Cutoff, ThresholdInclusive) {
  std::vector<CandidateScores> s = {{"x", 0.9, 0.9}, {"y", 0.5, 0.5}, {"z", 0.1, 0.1}};
  const auto r = qsuggest::apply_cutoff(rank_scored("q", s, Lambda(1.0)), Cutoff::at_least(0.5));
  EXPECT_EQ(ids_of(r), (std::vector<std::string>{"x", "y"}));
  EXPECT_EQ(r.cutoff.kind, Cutoff::Kind::threshold);
  EXPECT_THROW(Cutoff::at_least(1.5), qsuggest::ContractViolation);
}

TEST(RankCandidates, UnknownIdIsLookupError) {
  const auto f = qsuggest::testing::syntactic_fixture();
  const auto ctx = f.context();
  const std::vector<std::string> ids = {"q01", "nope"};
  try {
    qsuggest::rank_candidates(ctx->encode("x"), ids, ctx->index(), Lambda(0.5));
    FAIL() << "expected LookupError";
  } catch (const qsuggest::LookupError& e) {
    EXPECT_NE(std::string(e.what()).find("nope"), std::string::npos);
  }
}

// A random corpus over a small vocabulary, embedded with the hash embedder.
struct RandomCase {
  std::shared_ptr<const qsuggest::SearchContext> ctx;
  std::string query;
};

RandomCase random_case(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto words = qsuggest::testing::plain_words(25);
  auto text = [&] {
    std::string s;
    for (std::size_t i = 0, n = 1 + rng() % 6; i < n; ++i) s += words[rng() % words.size()] + " ";
    return s;
  };
  const auto provider = qsuggest::hash_embedder(16, seed);
  const auto config = qsuggest::PreprocessConfig::defaults();
  std::vector<qsuggest::Question> qs;
  for (std::size_t i = 0; i < 50; ++i) {
    qs.push_back(qsuggest::make_question("id" + std::to_string(rng() % 100000) + "_" + std::to_string(i), text(),
                                         config, *provider));
  }
  auto index = std::make_shared<const qsuggest::QuestionIndex>(std::move(qs), config, provider->id(), 16);
  return {std::make_shared<const qsuggest::SearchContext>(index, provider), text()};
}

// Independent argsort: score each question with one system, sort by that
// score descending with ascending ids on ties.
std::vector<std::string> standalone_order(const RandomCase& c, bool syntactic) {
  const auto q = c.ctx->encode(c.query);
  std::vector<std::pair<double, std::string>> scored;
  for (const auto& question : c.ctx->index().questions()) {
    const double s = syntactic ? qsuggest::cosine_tf(q.tf, question.tf)
                               : qsuggest::cosine_semantic(q.embedding, question.embedding);
    scored.emplace_back(s, question.id);
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  std::vector<std::string> out;
  for (const auto& [s, id] : scored) out.push_back(id);
  return out;
}

TEST(RankAll, EndpointOrderingsMatchStandaloneSystems) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto c = random_case(seed);
    const auto q = c.ctx->encode(c.query);
    EXPECT_EQ(ids_of(qsuggest::rank_all(q, c.ctx->index(), Lambda::syntactic())), standalone_order(c, true));
    EXPECT_EQ(ids_of(qsuggest::rank_all(q, c.ctx->index(), Lambda::semantic())), standalone_order(c, false));
  }
}

TEST(RankAll, RanksAreABijectionAndCombinedMatchesFormula) {
  for (std::uint64_t seed = 200; seed < 220; ++seed) {
    const auto c = random_case(seed);
    const Lambda l(static_cast<double>(seed % 11) / 10.0);
    const auto r = qsuggest::rank_all(c.ctx->encode(c.query), c.ctx->index(), l);
    ASSERT_EQ(r.candidates.size(), c.ctx->index().size());
    for (std::size_t i = 0; i < r.candidates.size(); ++i) {
      const auto& cand = r.candidates[i];
      EXPECT_EQ(cand.rank, i + 1);
      EXPECT_NEAR(cand.combined, l.value() * cand.s1 + (1 - l.value()) * cand.s2, 1e-12);
      if (i > 0) {
        const auto& prev = r.candidates[i - 1];
        EXPECT_TRUE(prev.combined > cand.combined ||
                    (prev.combined == cand.combined && prev.question_id < cand.question_id));
      }
    }
  }
}

TEST(RankCandidates, EvaluatesEachListedCandidateOnce) {
  const auto c = random_case(300);
  std::vector<std::string> ids;
  for (const auto& q : c.ctx->index().questions()) ids.push_back(q.id);
  ids.resize(std::min<std::size_t>(ids.size(), 4));
  const auto before = qsuggest::candidate_evaluations();
  qsuggest::rank_candidates(c.ctx->encode(c.query), ids, c.ctx->index(), Lambda(0.4));
  EXPECT_EQ(qsuggest::candidate_evaluations() - before, ids.size());
}

}  // namespace
