#include <algorithm>
#include <map>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "qsuggest/calibration.hpp"
#include "qsuggest/fusion.hpp"

// The fixtures are built from closed-form designs. These tests check that the
// library reproduces the designed scores, and that an SSRD curve computed by
// sorting the designed scores directly agrees with the library's curve.

namespace {

using qsuggest::testing::DesignedSet;
using qsuggest::testing::Fixture;

std::int64_t oracle_ssrd(const DesignedSet& ds, double lambda) {
  std::vector<std::pair<double, std::string>> fused;
  for (const auto& q : ds.questions) fused.emplace_back(lambda * q.s1 + (1 - lambda) * q.s2, q.id);
  std::sort(fused.begin(), fused.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  std::int64_t total = 0;
  for (std::size_t i = 0; i < fused.size(); ++i) {
    std::int64_t admin = 0;
    for (const auto& [id, r] : ds.set.assignments) {
      if (id == fused[i].second) admin = r;
    }
    const auto d = static_cast<std::int64_t>(i + 1) - admin;
    total += d * d;
  }
  return total;
}

void check_scores(const Fixture& f) {
  const auto ctx = f.context();
  for (const auto& ds : f.sets) {
    const auto q = ctx->encode(ds.set.probe_query);
    const auto ids = ds.set.ids();
    const auto scores = qsuggest::score_candidates(q, ids, ctx->index());
    ASSERT_EQ(scores.size(), ds.questions.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
      EXPECT_EQ(scores[i].question_id, ds.questions[i].id);
      EXPECT_NEAR(scores[i].s1, ds.questions[i].s1, 1e-9) << ds.questions[i].id;
      EXPECT_NEAR(scores[i].s2, ds.questions[i].s2, 1e-9) << ds.questions[i].id;
    }
  }
}

void check_curves(const Fixture& f) {
  const auto ctx = f.context();
  for (const auto& ds : f.sets) {
    const auto best = qsuggest::find_best_lambda(ds.set, *ctx, 0.1);
    ASSERT_EQ(best.curve.points.size(), 11u);
    for (int i = 0; i <= 10; ++i) {
      EXPECT_EQ(best.curve.points[i].ssrd, oracle_ssrd(ds, i / 10.0)) << ds.set.source << " lambda " << i / 10.0;
    }
  }
}

TEST(Fixtures, MixedScoresAndCurves) {
  const auto f = qsuggest::testing::mixed_fixture();
  EXPECT_EQ(f.questions.size(), 50u);
  ASSERT_EQ(f.sets.size(), 3u);
  check_scores(f);
  check_curves(f);
}

TEST(Fixtures, MixedDesignHasInteriorWindowsContainingTheMean) {
  const auto f = qsuggest::testing::mixed_fixture();
  double mean = 0;
  std::vector<double> bests;
  for (const auto& ds : f.sets) {
    EXPECT_GT(oracle_ssrd(ds, 0.0), 0) << ds.set.source;
    EXPECT_GT(oracle_ssrd(ds, 1.0), 0) << ds.set.source;
    double best = -1;
    for (int i = 0; i <= 10 && best < 0; ++i) {
      if (oracle_ssrd(ds, i / 10.0) == 0) best = i / 10.0;
    }
    ASSERT_GE(best, 0.0) << ds.set.source;
    bests.push_back(best);
    mean += best / static_cast<double>(f.sets.size());
  }
  for (const auto& ds : f.sets) EXPECT_EQ(oracle_ssrd(ds, mean), 0) << ds.set.source << " at " << mean;
}

TEST(Fixtures, SingleSystemFixtures) {
  for (const auto& f : {qsuggest::testing::syntactic_fixture(), qsuggest::testing::semantic_fixture(),
                        qsuggest::testing::reversal_fixture()}) {
    check_scores(f);
    check_curves(f);
  }
}

TEST(Fixtures, ParaphrasesShareNoStems) {
  const auto f = qsuggest::testing::paraphrase_fixture();
  const auto ctx = f.context();
  ASSERT_EQ(f.probes.size(), f.questions.size());
  for (std::size_t i = 0; i < f.probes.size(); ++i) {
    const auto q = ctx->encode(f.probes[i]);
    const auto& target = ctx->index().at(f.questions[i].first);
    EXPECT_EQ(qsuggest::cosine_tf(q.tf, target.tf), 0.0) << f.probes[i];
    EXPECT_GE(qsuggest::cosine_semantic(q.embedding, target.embedding), 0.2) << f.probes[i];
  }
}

TEST(Fixtures, WordsAreStableAndNotStopWords) {
  const auto words = qsuggest::testing::plain_words(500);
  EXPECT_EQ(words.size(), 500u);
  const auto& stop = qsuggest::default_stopwords();
  for (const auto& w : words) {
    EXPECT_EQ(qsuggest::stem(w), w);
    EXPECT_FALSE(stop.contains(w));
  }
  EXPECT_EQ(qsuggest::testing::plain_words(10, 3), std::vector<std::string>(words.begin() + 3, words.begin() + 13));
}

TEST(Fixtures, WrittenFilesReloadToTheSameSets) {
  qsuggest::testing::TempDir dir;
  const auto f = qsuggest::testing::mixed_fixture();
  f.write(dir.path());
  const auto m = qsuggest::load_manifest(dir / "manifest.csv");
  const auto index = f.build_index();
  const auto sets = qsuggest::load_ranked_sets(m, index);
  ASSERT_EQ(sets.size(), f.sets.size());
  for (std::size_t i = 0; i < sets.size(); ++i) {
    EXPECT_EQ(sets[i].probe_query, f.sets[i].set.probe_query);
    EXPECT_EQ(sets[i].assignments, f.sets[i].set.assignments);
  }
}

}  // namespace
