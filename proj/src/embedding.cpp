#include "qsuggest/embedding.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qsuggest/errors.hpp"
#include "qsuggest/fingerprint.hpp"

namespace qsuggest {
namespace {

std::vector<std::string_view> split_spaces(std::string_view line) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (pos < line.size()) {
    const auto next = line.find(' ', pos);
    const auto end = next == std::string_view::npos ? line.size() : next;
    parts.push_back(line.substr(pos, end - pos));
    pos = end + 1;
  }
  return parts;
}

std::string_view strip_line_end(std::string_view line) {
  while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.remove_suffix(1);
  return line;
}

bool parse_size(std::string_view s, std::size_t& out) {
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

bool parse_double(std::string_view s, double& out) {
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

// Sorting first makes the mean independent of token order, bit for bit.
TokenList sorted_copy(const TokenList& terms) {
  TokenList sorted = terms;
  std::sort(sorted.begin(), sorted.end());
  return sorted;
}

}  // namespace

DocumentEmbedding::DocumentEmbedding(std::vector<double> values) : values_(std::move(values)) {
  for (double v : values_) {
    if (!std::isfinite(v)) throw ContractViolation("document embedding has a non-finite component");
    squared_norm_ += v * v;
    if (v != 0.0) is_zero_ = false;
  }
}

DocumentEmbedding DocumentEmbedding::zero(std::size_t dimension) {
  return DocumentEmbedding(std::vector<double>(dimension, 0.0));
}

double cosine_semantic(const DocumentEmbedding& a, const DocumentEmbedding& b) {
  if (a.dimension() != b.dimension()) {
    throw ContractViolation("embedding dimension mismatch: " + std::to_string(a.dimension()) +
                            " vs " + std::to_string(b.dimension()));
  }
  if (a.is_zero() || b.is_zero()) return 0.0;
  double sum = 0.0;
  const auto av = a.values();
  const auto bv = b.values();
  for (std::size_t i = 0; i < av.size(); ++i) sum += av[i] * bv[i];
  const double denom = std::sqrt(a.squared_norm() * b.squared_norm());
  if (!(denom > 0.0)) return 0.0;
  return std::clamp(sum / denom, 0.0, 1.0);
}

WordVectorTable::WordVectorTable(std::size_t dimension, std::string source_id)
    : dimension_(dimension), source_id_(std::move(source_id)) {
  if (dimension_ == 0) throw ContractViolation("word vector dimension must be positive");
}

bool WordVectorTable::insert(std::string word, std::vector<double> vector) {
  if (vector.size() != dimension_) {
    throw ContractViolation("word vector for '" + word + "' has " + std::to_string(vector.size()) +
                            " components, expected " + std::to_string(dimension_));
  }
  if (vectors_.contains(word)) return false;
  order_.push_back(word);
  vectors_.emplace(std::move(word), std::move(vector));
  return true;
}

const std::vector<double>* WordVectorTable::find(std::string_view word) const {
  const auto it = vectors_.find(std::string(word));
  return it == vectors_.end() ? nullptr : &it->second;
}

WordVectorTable load_word_vectors(const std::filesystem::path& path,
                                  std::optional<std::size_t> limit) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot open word-vector file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string content = buffer.str();
  const std::string where = path.string();

  std::istringstream lines(content);
  std::string raw;
  if (!std::getline(lines, raw)) throw InputError(where + ":1: missing header");
  const auto header = split_spaces(strip_line_end(raw));
  std::size_t declared = 0;
  std::size_t dimension = 0;
  if (header.size() != 2 || !parse_size(header[0], declared) || !parse_size(header[1], dimension) ||
      dimension == 0) {
    throw InputError(where + ":1: malformed header, expected \"<count> <dimension>\"");
  }

  std::string source = "sha256=" + sha256_hex(content) + ";d=" + std::to_string(dimension);
  if (limit) source += ";limit=" + std::to_string(*limit);
  WordVectorTable table(dimension, std::move(source));

  std::size_t line_no = 1;
  std::size_t seen = 0;
  while ((!limit || table.size() < *limit) && std::getline(lines, raw)) {
    ++line_no;
    const auto line = strip_line_end(raw);
    if (line.empty()) continue;
    const auto parts = split_spaces(line);
    if (parts.size() != dimension + 1 || parts[0].empty()) {
      throw InputError(where + ":" + std::to_string(line_no) + ": expected a word and " +
                       std::to_string(dimension) + " components, found " +
                       std::to_string(parts.empty() ? 0 : parts.size() - 1) + " components");
    }
    std::vector<double> vec(dimension);
    for (std::size_t i = 0; i < dimension; ++i) {
      if (!parse_double(parts[i + 1], vec[i]) || !std::isfinite(vec[i])) {
        throw InputError(where + ":" + std::to_string(line_no) + ": component " +
                         std::to_string(i + 1) + " is not a finite number");
      }
    }
    ++seen;
    table.insert(std::string(parts[0]), std::move(vec));
  }
  if (!limit && seen != declared) {
    throw InputError(where + ": header declares " + std::to_string(declared) + " vectors, found " +
                     std::to_string(seen));
  }
  return table;
}

DocumentEmbedding embed_mean(const TokenList& tokens, const WordVectorTable& table) {
  std::vector<double> sum(table.dimension(), 0.0);
  std::size_t used = 0;
  for (const auto& t : sorted_copy(tokens)) {
    const auto* v = table.find(t);
    if (v == nullptr) continue;
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += (*v)[i];
    ++used;
  }
  if (used == 0) return DocumentEmbedding::zero(table.dimension());
  for (auto& x : sum) x /= static_cast<double>(used);
  return DocumentEmbedding(std::move(sum));
}

WordVectorProvider::WordVectorProvider(std::shared_ptr<const WordVectorTable> table)
    : table_(std::move(table)) {
  if (!table_) throw ContractViolation("word vector provider needs a table");
}

std::string WordVectorProvider::id() const { return "wordvec:" + table_->source_id(); }

DocumentEmbedding WordVectorProvider::embed(const TokenList& terms) const {
  return embed_mean(terms, *table_);
}

std::size_t WordVectorProvider::count_oov(const TokenList& terms) const {
  return static_cast<std::size_t>(std::count_if(
      terms.begin(), terms.end(), [&](const std::string& t) { return table_->find(t) == nullptr; }));
}

}  // namespace qsuggest
