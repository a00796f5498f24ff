#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "qsuggest/calibration.hpp"
#include "qsuggest/context.hpp"
#include "qsuggest/embedding.hpp"
#include "qsuggest/index.hpp"

namespace qsuggest::testing {

// Made-up words that are neither stop words nor changed by the stemmer, so
// a question's terms and stems are the same list. Deterministic.
std::vector<std::string> plain_words(std::size_t n, std::size_t skip = 0);

// A question designed against one probe: it repeats `hits` of the probe's K
// words and adds `tail` words of its own, whose shared vector is solved so
// the semantic score lands on `s2`.
struct Design {
  std::size_t hits = 0;
  std::size_t tail = 0;
  double s2 = 0.0;
};

// Closed forms for a design against a K-word probe.
double designed_s1(std::size_t probe_words, const Design& d);

struct DesignedQuestion {
  std::string id;
  double s1 = 0.0;  // designed scores
  double s2 = 0.0;
};

struct DesignedSet {
  RankedSet set;                         // admin ranks = position in `questions`
  std::vector<DesignedQuestion> questions;
};

// Raw material for one corpus: word vectors, questions and ranked sets.
struct Fixture {
  std::size_t dimension = 0;
  std::vector<std::pair<std::string, std::vector<double>>> vectors;
  std::vector<std::pair<std::string, std::string>> questions;  // id, title
  std::vector<DesignedSet> sets;
  std::vector<std::string> probes;  // extra probes (paraphrase fixture)

  std::shared_ptr<const WordVectorTable> table() const;
  std::shared_ptr<const EmbeddingProvider> provider() const;
  QuestionIndex build_index() const;
  std::shared_ptr<const SearchContext> context() const;
  std::vector<RankedSet> ranked_sets() const;

  // corpus.csv, vectors.txt, manifest.csv and set-<i>.csv.
  void write(const std::filesystem::path& dir) const;
};

// Three 4-question sets on which each standalone system misranks a different
// admin pair; every set's zero-SSRD window sits strictly inside (0, 1) and
// contains the mean of the per-set bests. Padded to 50 questions.
Fixture mixed_fixture();
// Admin order follows the syntactic score and contradicts the semantic one.
Fixture syntactic_fixture();
// The mirror image.
Fixture semantic_fixture();
// Four questions whose semantic order is the exact reverse of the admin
// (syntactic) order.
Fixture reversal_fixture();
// Paraphrases with disjoint vocabulary whose words share meaning through the
// vector table. `questions` are indexed, `probes` are their rewordings.
Fixture paraphrase_fixture();

// Synthetic corpus text for scale tests: deterministic for a seed.
std::vector<std::pair<std::string, std::string>> synthetic_questions(std::size_t n, std::uint64_t seed);
void write_corpus_csv(const std::filesystem::path& path,
                      const std::vector<std::pair<std::string, std::string>>& questions);

// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

std::string read_file(const std::filesystem::path& path);

}  // namespace qsuggest::testing
