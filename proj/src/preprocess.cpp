#include "qsuggest/preprocess.hpp"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <atomic>
#include <fstream>
#include <istream>
#include <sstream>

#include "qsuggest/errors.hpp"
#include "qsuggest/fingerprint.hpp"
#include "qsuggest/porter_stemmer.hpp"

namespace qsuggest {
namespace detail {
extern const std::string_view kDefaultStopwordText;
}  // namespace detail

namespace {

std::atomic<std::uint64_t> g_preprocess_calls{0};

constexpr char32_t kReplacementChar = 0xFFFD;

void append_utf8(std::string& out, char32_t cp) {
  char buf[U8_MAX_LENGTH];
  int32_t len = 0;
  U8_APPEND_UNSAFE(buf, len, static_cast<UChar32>(cp));
  out.append(buf, static_cast<std::size_t>(len));
}

template <typename Fn>
void for_each_code_point(std::string_view text, Fn&& fn) {
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  const auto length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c = 0;
    U8_NEXT(s, i, length, c);
    fn(c < 0 ? kReplacementChar : static_cast<char32_t>(c));
  }
}

char32_t fold(char32_t cp) {
  return static_cast<char32_t>(u_foldCase(static_cast<UChar32>(cp), U_FOLD_CASE_DEFAULT));
}

bool is_ascii(std::string_view s) {
  for (unsigned char c : s) {
    if (c >= 0x80) return false;
  }
  return true;
}

std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n\f\v";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

}  // namespace

std::string_view to_string(StemmerId id) {
  switch (id) {
    case StemmerId::porter:
      return "porter";
    case StemmerId::none:
      return "none";
  }
  return "porter";
}

StemmerId parse_stemmer_id(std::string_view name) {
  if (name == "porter") return StemmerId::porter;
  if (name == "none") return StemmerId::none;
  throw InputError("unknown stemmer '" + std::string(name) + "' (expected porter or none)");
}

std::set<std::string> parse_stopwords(std::istream& in) {
  std::set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    const auto term = trim(line);
    if (term.empty() || term.front() == '#') continue;
    words.insert(fold_case(term));
  }
  return words;
}

std::set<std::string> load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw NotFoundError("cannot open stop-word list " + path.string());
  return parse_stopwords(in);
}

const std::set<std::string>& default_stopwords() {
  static const std::set<std::string> words = [] {
    std::istringstream in{std::string(detail::kDefaultStopwordText)};
    return parse_stopwords(in);
  }();
  return words;
}

std::set<char32_t> ascii_punctuation() {
  std::set<char32_t> out;
  for (char32_t c = 0x21; c < 0x7f; ++c) {
    const bool alnum = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
    if (!alnum) out.insert(c);
  }
  return out;
}

PreprocessConfig PreprocessConfig::defaults() {
  return PreprocessConfig{default_stopwords(), ascii_punctuation(), StemmerId::porter};
}

std::string PreprocessConfig::stopword_hash() const {
  Sha256 h;
  h.field(std::uint64_t{stopwords.size()});
  for (const auto& w : stopwords) h.field(w);
  return h.hex_digest();
}

std::string PreprocessConfig::fingerprint() const {
  Sha256 h;
  h.field(std::string_view("preprocess/v1"));
  h.field(to_string(stemmer));
  h.field(std::uint64_t{punctuation.size()});
  for (char32_t c : punctuation) h.field(std::uint64_t{c});
  h.field(stopword_hash());
  return h.hex_digest();
}

std::string fold_case(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for_each_code_point(text, [&](char32_t cp) { append_utf8(out, fold(cp)); });
  return out;
}

std::string stem(std::string_view token, StemmerId stemmer) {
  if (stemmer == StemmerId::none || !is_ascii(token)) return std::string(token);
  return porter_stem(token);
}

AnalyzedText analyze(std::string_view text, const PreprocessConfig& config) {
  g_preprocess_calls.fetch_add(1, std::memory_order_relaxed);

  AnalyzedText out;
  std::string current;
  auto flush = [&] {
    if (current.empty()) return;
    if (!config.stopwords.contains(current)) {
      std::string stemmed = stem(current, config.stemmer);
      if (!stemmed.empty() && !config.stopwords.contains(stemmed)) {
        out.terms.push_back(current);
        out.stems.push_back(std::move(stemmed));
      }
    }
    current.clear();
  };

  for_each_code_point(text, [&](char32_t cp) {
    if (config.punctuation.contains(cp) || u_isUWhiteSpace(static_cast<UChar32>(cp))) {
      flush();
      return;
    }
    append_utf8(current, fold(cp));
  });
  flush();
  return out;
}

TokenList preprocess(std::string_view text, const PreprocessConfig& config) {
  return analyze(text, config).stems;
}

std::uint64_t preprocess_invocations() noexcept {
  return g_preprocess_calls.load(std::memory_order_relaxed);
}

}  // namespace qsuggest
