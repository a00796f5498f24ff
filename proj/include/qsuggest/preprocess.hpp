#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace qsuggest {

// Ordered sequence of normalized terms. Every entry is non-empty, case-folded,
// free of whitespace and configured punctuation, and not a stop word.
using TokenList = std::vector<std::string>;

enum class StemmerId { porter, none };

std::string_view to_string(StemmerId id);
StemmerId parse_stemmer_id(std::string_view name);

struct PreprocessConfig {
  std::set<std::string> stopwords;
  std::set<char32_t> punctuation;
  StemmerId stemmer = StemmerId::porter;

  // Bundled English stop list, ASCII punctuation, Porter stemming.
  static PreprocessConfig defaults();

  // SHA-256 over the stop list content only.
  std::string stopword_hash() const;
  // SHA-256 over every field; two configs with equal fingerprints preprocess identically.
  std::string fingerprint() const;

  friend bool operator==(const PreprocessConfig&, const PreprocessConfig&) = default;
};

// The bundled list (data/stopwords_en.txt).
const std::set<std::string>& default_stopwords();
// The 32 printable ASCII punctuation characters.
std::set<char32_t> ascii_punctuation();

// Stop-word list format: UTF-8, one term per line, '#' lines and blank lines
// ignored, surrounding whitespace trimmed. Terms are case-folded on load.
std::set<std::string> parse_stopwords(std::istream& in);
std::set<std::string> load_stopwords(const std::filesystem::path& path);

// Both views of one analyzed text. `terms` are the case-folded surface words
// that survive stop-word removal; `stems` are the same words after stemming.
// The two lists are index-aligned.
struct AnalyzedText {
  TokenList terms;
  TokenList stems;

  friend bool operator==(const AnalyzedText&, const AnalyzedText&) = default;
};

// Punctuation becomes whitespace, text is case-folded and split on Unicode
// whitespace, stop words are dropped, and the survivors are stemmed. A term
// whose stem is itself a stop word is dropped too. Never throws on content;
// invalid UTF-8 sequences are replaced by U+FFFD.
AnalyzedText analyze(std::string_view text, const PreprocessConfig& config);

// Stemmed view of analyze().
TokenList preprocess(std::string_view text, const PreprocessConfig& config);

// Stems one case-folded token. Tokens containing non-ASCII bytes are returned
// unchanged under the Porter stemmer.
std::string stem(std::string_view token, StemmerId stemmer = StemmerId::porter);

// Unicode simple case folding of a UTF-8 string.
std::string fold_case(std::string_view text);

// Number of analyze()/preprocess() calls made by this process.
std::uint64_t preprocess_invocations() noexcept;

}  // namespace qsuggest
