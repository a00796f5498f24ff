#include "fixtures.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "qsuggest/csv.hpp"
#include "qsuggest/preprocess.hpp"
#include "qsuggest/store.hpp"

namespace qsuggest::testing {
namespace {

namespace fs = std::filesystem;

double uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

const char* const kPrefixes[] = {"How do I", "What is the", "Is there a", "Can I", "Why does the"};

// Solves the tail-word weight alpha so that a question made of `hits` probe
// words plus `tail` copies of (alpha u + beta w) has cosine `target` with the
// probe direction u. The cosine is increasing in alpha on the bracket used.
double solve_alpha(std::size_t k, std::size_t hits, std::size_t tail, double target) {
  const double c = static_cast<double>(hits) / std::sqrt(static_cast<double>(k));
  const double t = static_cast<double>(tail);
  const double p = static_cast<double>(hits);
  // At a = -c/t with hits == k the vector cancels to zero; the limit there is 0.
  auto f = [&](double a) {
    const double num = c + t * a;
    return num <= 0.0 ? 0.0 : num / std::sqrt(p + t * t + 2.0 * t * a * c);
  };
  double lo = t >= c ? -c / t : 0.0;
  double hi = 1.0;
  if (!(f(lo) <= target && target <= f(hi))) {
    throw std::logic_error("fixture design unreachable: s2=" + std::to_string(target));
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

class Builder {
 public:
  explicit Builder(std::size_t dimension) : words_(plain_words(4000)) {
    fixture_.dimension = dimension;
    orth_ = axis();
  }

  std::size_t axis() {
    if (next_axis_ >= fixture_.dimension) throw std::logic_error("fixture ran out of axes");
    return next_axis_++;
  }

  std::string take() { return words_.at(next_word_++); }

  std::vector<double> zeros() const { return std::vector<double>(fixture_.dimension, 0.0); }

  void add_vector(const std::string& word, std::vector<double> v) { fixture_.vectors.emplace_back(word, std::move(v)); }

  std::string next_id() {
    char buf[16];
    std::snprintf(buf, sizeof buf, "q%02zu", ++question_count_);
    return buf;
  }

  std::string sentence(const std::vector<std::string>& words) {
    std::string s = kPrefixes[sentence_count_++ % std::size(kPrefixes)];
    for (const auto& w : words) s += " " + w;
    return s + "?";
  }

  void add_set(std::size_t k, const std::vector<Design>& designs) {
    std::vector<std::string> probe;
    std::vector<std::size_t> axes;
    for (std::size_t i = 0; i < k; ++i) {
      probe.push_back(take());
      axes.push_back(axis());
      auto v = zeros();
      v[axes.back()] = 1.0;
      add_vector(probe.back(), std::move(v));
    }

    DesignedSet ds;
    ds.set.probe_query = sentence(probe);
    ds.set.source = "set-" + std::to_string(fixture_.sets.size() + 1) + ".csv";
    std::int64_t rank = 0;
    for (const auto& d : designs) {
      std::vector<std::string> words(probe.begin(), probe.begin() + static_cast<std::ptrdiff_t>(d.hits));
      double s2 = d.s2;
      if (d.tail == 0) {
        s2 = std::sqrt(static_cast<double>(d.hits) / static_cast<double>(k));
      } else {
        const double alpha = solve_alpha(k, d.hits, d.tail, d.s2);
        const double beta = std::sqrt(1.0 - alpha * alpha);
        auto v = zeros();
        for (auto a : axes) v[a] = alpha / std::sqrt(static_cast<double>(k));
        v[orth_] = beta;
        for (std::size_t i = 0; i < d.tail; ++i) {
          words.push_back(take());
          add_vector(words.back(), v);
        }
      }
      const auto id = next_id();
      fixture_.questions.emplace_back(id, sentence(words));
      ds.set.assignments.emplace_back(id, ++rank);
      ds.questions.push_back({id, designed_s1(k, d), s2});
    }
    fixture_.sets.push_back(std::move(ds));
  }

  // Questions unrelated to any set, on their own axes.
  void pad_to(std::size_t total, std::size_t axes_count, std::uint64_t seed) {
    std::vector<std::size_t> axes;
    for (std::size_t i = 0; i < axes_count; ++i) axes.push_back(axis());
    std::mt19937_64 rng(seed);
    while (fixture_.questions.size() < total) {
      std::vector<std::string> words;
      const std::size_t n = 3 + rng() % 4;
      for (std::size_t i = 0; i < n; ++i) {
        words.push_back(take());
        auto v = zeros();
        for (auto a : axes) v[a] = 2.0 * uniform(rng) - 1.0;
        add_vector(words.back(), std::move(v));
      }
      fixture_.questions.emplace_back(next_id(), sentence(words));
    }
  }

  Fixture finish() { return std::move(fixture_); }

 private:
  Fixture fixture_;
  std::vector<std::string> words_;
  std::size_t next_word_ = 0;
  std::size_t next_axis_ = 0;
  std::size_t orth_ = 0;
  std::size_t question_count_ = 0;
  std::size_t sentence_count_ = 0;
};

// A set whose zero-SSRD lambda window is (lo, hi): A matches the probe, B and
// D are paraphrase-only, C mixes probe words with a tail and scores c under
// both systems. Admin order A, B, C, D (, E).
void add_window_set(Builder& b, std::size_t k, Design c_design, double lo, double hi, bool with_e) {
  const double c = designed_s1(k, c_design);
  c_design.s2 = c;
  std::vector<Design> designs = {
      {k, 0, 1.0},
      {0, 1, c / (1.0 - hi)},
      c_design,
      {0, 1, c / (1.0 - lo)},
  };
  if (with_e) designs.push_back({0, 1, 0.1});
  b.add_set(k, designs);
}

}  // namespace

std::vector<std::string> plain_words(std::size_t n, std::size_t skip) {
  static const std::string consonants = "bdfgklmnprtvz";
  static const std::string vowels = "aeiou";
  const auto& stop = default_stopwords();
  const std::size_t space = consonants.size() * vowels.size() * consonants.size() * vowels.size() * consonants.size();
  std::vector<std::string> out;
  std::set<std::string> seen;
  // A stride coprime to the space walks it in a scattered but fixed order.
  for (std::size_t i = 0, code = 7; out.size() < n + skip && i < space; ++i, code = (code + 7919) % space) {
    std::size_t x = code;
    std::string w;
    for (int pos = 0; pos < 5; ++pos) {
      const auto& alphabet = pos % 2 == 0 ? consonants : vowels;
      w.push_back(alphabet[x % alphabet.size()]);
      x /= alphabet.size();
    }
    if (stop.count(w) || stem(w) != w || !seen.insert(w).second) continue;
    out.push_back(w);
  }
  if (out.size() < n + skip) throw std::logic_error("not enough plain words");
  out.erase(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(skip));
  return out;
}

double designed_s1(std::size_t probe_words, const Design& d) {
  if (d.hits == 0) return 0.0;
  return static_cast<double>(d.hits) /
         (std::sqrt(static_cast<double>(probe_words)) * std::sqrt(static_cast<double>(d.hits + d.tail)));
}

std::shared_ptr<const WordVectorTable> Fixture::table() const {
  auto t = std::make_shared<WordVectorTable>(dimension, "fixture");
  for (const auto& [w, v] : vectors) t->insert(w, v);
  return t;
}

std::shared_ptr<const EmbeddingProvider> Fixture::provider() const {
  return std::make_shared<const WordVectorProvider>(table());
}

QuestionIndex Fixture::build_index() const {
  const auto p = provider();
  const auto config = PreprocessConfig::defaults();
  std::vector<Question> qs;
  for (const auto& [id, title] : questions) qs.push_back(make_question(id, title, config, *p));
  return QuestionIndex(std::move(qs), config, p->id(), p->dimension());
}

std::shared_ptr<const SearchContext> Fixture::context() const {
  return std::make_shared<const SearchContext>(std::make_shared<const QuestionIndex>(build_index()), provider());
}

std::vector<RankedSet> Fixture::ranked_sets() const {
  std::vector<RankedSet> out;
  for (const auto& s : sets) out.push_back(s.set);
  return out;
}

void Fixture::write(const fs::path& dir) const {
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "vectors.txt");
    out << vectors.size() << " " << dimension << "\n";
    for (const auto& [w, v] : vectors) {
      out << w;
      for (double x : v) out << " " << csv::number(x);
      out << "\n";
    }
  }
  write_corpus_csv(dir / "corpus.csv", questions);
  std::ofstream manifest(dir / "manifest.csv");
  manifest << "probe_query,ranked_file\n";
  for (const auto& s : sets) {
    manifest << csv::join({s.set.probe_query, s.set.source}) << "\n";
    std::ofstream ranked(dir / s.set.source);
    ranked << "question_id,assigned_rank\n";
    for (const auto& [id, rank] : s.set.assignments) ranked << id << "," << rank << "\n";
  }
}

Fixture mixed_fixture() {
  Builder b(16);
  add_window_set(b, 2, {2, 2, 0.0}, 0.168, 0.271, false);
  add_window_set(b, 2, {2, 2, 0.0}, 0.15, 0.25, false);
  add_window_set(b, 3, {1, 3, 0.0}, 0.21, 0.36, true);
  b.pad_to(50, 8, 11);
  return b.finish();
}

Fixture syntactic_fixture() {
  Builder b(12);
  b.add_set(4, {{4, 3, 0.3}, {3, 1, 0.9}, {1, 1, 0.6}, {0, 1, 0.95}});
  b.pad_to(10, 6, 12);
  return b.finish();
}

Fixture semantic_fixture() {
  Builder b(12);
  b.add_set(3, {{0, 1, 0.95}, {1, 1, 0.7}, {3, 2, 0.3}, {2, 3, 0.1}});
  b.pad_to(10, 6, 13);
  return b.finish();
}

Fixture reversal_fixture() {
  Builder b(8);
  b.add_set(4, {{4, 2, 0.1}, {3, 2, 0.2}, {2, 2, 0.3}, {1, 2, 0.4}});
  return b.finish();
}

Fixture paraphrase_fixture() {
  // probe, indexed rewording, and the concept of each content word.
  struct Pair {
    const char* probe;
    const char* indexed;
  };
  static const Pair pairs[] = {
      {"What is your age?", "How old are you?"},
      {"How can I purchase a car?", "Where can I buy an automobile?"},
      {"How do I fix my broken laptop?", "Repairing a damaged notebook"},
      {"Best way to learn programming?", "Good method for studying coding?"},
      {"How to lose weight quickly?", "Fast techniques for shedding pounds"},
      {"Where can I find cheap flights?", "Locating inexpensive airfare"},
      {"How do I start a business?", "Launching a company"},
      {"What causes headaches?", "Reasons for migraines"},
      {"How to cook pasta?", "Preparing spaghetti"},
      {"Is coffee bad for health?", "Does caffeine harm wellbeing?"},
      {"How to improve my sleep?", "Enhancing slumber"},
      {"Which smartphone takes great photos?", "Mobile phone with excellent camera"},
  };
  static const std::map<std::string, std::string> concept_of = {
      {"age", "age"}, {"old", "age"},
      {"purchase", "buy"}, {"buy", "buy"}, {"car", "car"}, {"automobile", "car"},
      {"fix", "fix"}, {"repairing", "fix"}, {"broken", "broken"}, {"damaged", "broken"},
      {"laptop", "laptop"}, {"notebook", "laptop"},
      {"best", "good"}, {"good", "good"}, {"way", "method"}, {"method", "method"},
      {"learn", "learn"}, {"studying", "learn"}, {"programming", "code"}, {"coding", "code"},
      {"lose", "lose"}, {"shedding", "lose"}, {"weight", "weight"}, {"pounds", "weight"},
      {"quickly", "fast"}, {"fast", "fast"}, {"techniques", "method"},
      {"find", "find"}, {"locating", "find"}, {"cheap", "cheap"}, {"inexpensive", "cheap"},
      {"flights", "flight"}, {"airfare", "flight"},
      {"start", "start"}, {"launching", "start"}, {"business", "business"}, {"company", "business"},
      {"causes", "cause"}, {"reasons", "cause"}, {"headaches", "headache"}, {"migraines", "headache"},
      {"cook", "cook"}, {"preparing", "cook"}, {"pasta", "pasta"}, {"spaghetti", "pasta"},
      {"coffee", "coffee"}, {"caffeine", "coffee"}, {"bad", "bad"}, {"harm", "bad"},
      {"health", "health"}, {"wellbeing", "health"},
      {"improve", "improve"}, {"enhancing", "improve"}, {"sleep", "sleep"}, {"slumber", "sleep"},
      {"smartphone", "phone"}, {"mobile", "phone"}, {"phone", "phone"},
      {"takes", "photo"}, {"photos", "photo"}, {"camera", "photo"},
      {"great", "great"}, {"excellent", "great"},
  };

  std::map<std::string, std::size_t> concept_axis;
  for (const auto& [w, c] : concept_of) concept_axis.emplace(c, 0);
  std::size_t next = 1;  // axis 0 is the direction every word shares
  for (auto& [c, a] : concept_axis) a = next++;

  Fixture f;
  f.dimension = next;
  std::mt19937_64 rng(2024);
  for (const auto& [w, c] : concept_of) {
    std::vector<double> v(f.dimension, 0.0);
    for (auto& x : v) x = 0.05 * (2.0 * uniform(rng) - 1.0);
    v[0] += 0.5;
    v[concept_axis.at(c)] += 1.0;
    f.vectors.emplace_back(w, std::move(v));
  }
  std::size_t i = 0;
  for (const auto& p : pairs) {
    char id[16];
    std::snprintf(id, sizeof id, "p%02zu", ++i);
    f.questions.emplace_back(id, p.indexed);
    f.probes.push_back(p.probe);
  }
  return f;
}

std::vector<std::pair<std::string, std::string>> synthetic_questions(std::size_t n, std::uint64_t seed) {
  static const char* const fillers[] = {"how", "do", "I", "the", "a", "is", "what", "can", "with", "in", "my", "of"};
  const auto vocab = plain_words(3000);
  std::mt19937_64 rng(seed);
  std::vector<std::pair<std::string, std::string>> out;
  out.reserve(n);
  for (std::size_t q = 0; q < n; ++q) {
    const std::size_t len = 4 + rng() % 9;
    std::string text;
    for (std::size_t i = 0; i < len; ++i) {
      if (!text.empty()) text += ' ';
      if (rng() % 4 == 0) {
        text += fillers[rng() % std::size(fillers)];
      } else {
        // Squaring skews toward the front of the vocabulary, like real text.
        const double u = uniform(rng);
        std::string w = vocab[static_cast<std::size_t>(u * u * static_cast<double>(vocab.size()))];
        if (rng() % 10 == 0) w[0] = static_cast<char>(w[0] - 'a' + 'A');
        text += w;
      }
    }
    text += (rng() % 2 == 0) ? "?" : ", please.";
    char id[32];
    std::snprintf(id, sizeof id, "s%06zu", q + 1);
    out.emplace_back(id, std::move(text));
  }
  return out;
}

void write_corpus_csv(const fs::path& path, const std::vector<std::pair<std::string, std::string>>& questions) {
  std::ofstream out(path);
  out << "id,title\n";
  for (const auto& [id, title] : questions) out << csv::join({id, title}) << "\n";
}

TempDir::TempDir() {
  auto pattern = (fs::temp_directory_path() / "qsuggest-test-XXXXXX").string();
  if (mkdtemp(pattern.data()) == nullptr) throw std::runtime_error("mkdtemp failed");
  path_ = pattern;
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace qsuggest::testing
