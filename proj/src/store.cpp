#include "qsuggest/store.hpp"

#include <fstream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "qsuggest/csv.hpp"
#include "qsuggest/errors.hpp"

namespace qsuggest {
namespace {

using nlohmann::json;

constexpr const char* kIndexFormat = "qsuggest-index";
constexpr const char* kModelFormat = "qsuggest-model";

void write_atomically(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw InputError("failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw InputError("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

json read_json_file(const std::filesystem::path& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError(std::string(what) + " file not found: " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw SchemaError(std::string(what) + " file " + path.string() + " is truncated or malformed: " + e.what());
  }
}

void check_header(const json& doc, const char* format, int version, const std::filesystem::path& path) {
  if (!doc.is_object() || doc.value("format", std::string()) != format) {
    throw SchemaError(path.string() + " is not a " + std::string(format) + " file");
  }
  const int found = doc.value("format_version", -1);
  if (found != version) {
    throw SchemaError(path.string() + ": unsupported " + std::string(format) + " format_version " +
                      std::to_string(found) + " (expected " + std::to_string(version) + ")");
  }
}

json tokens_json(const TokenList& tokens) { return json(tokens); }

// Read errors for the corpus are collected per row rather than thrown.
struct RowSink {
  std::vector<CorpusRow> rows;
  std::vector<std::string> problems;
  std::unordered_map<std::string, std::size_t> first_line;
  std::string source;

  void add(CorpusRow row) {
    if (row.id.empty()) {
      problems.push_back(source + ":" + std::to_string(row.line) + ": empty id");
      return;
    }
    const auto [it, inserted] = first_line.emplace(row.id, row.line);
    if (!inserted) {
      problems.push_back(source + ":" + std::to_string(row.line) + ": duplicate id '" + row.id +
                         "' (first seen on line " + std::to_string(it->second) + ")");
      return;
    }
    rows.push_back(std::move(row));
  }
};

void read_csv_corpus(std::istream& in, RowSink& sink) {
  csv::Reader reader(in);
  csv::Record rec;
  try {
    if (!reader.next(rec)) {
      sink.problems.push_back(sink.source + ": corpus is empty");
      return;
    }
    const auto header = rec.fields;
    std::optional<std::size_t> id_col, title_col, body_col;
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == "id") id_col = i;
      if (header[i] == "title") title_col = i;
      if (header[i] == "body") body_col = i;
    }
    if (!id_col || !title_col) {
      sink.problems.push_back(sink.source + ":" + std::to_string(rec.line) +
                              ": header must contain \"id\" and \"title\" columns");
      return;
    }
    while (reader.next(rec)) {
      if (rec.fields.size() != header.size()) {
        sink.problems.push_back(sink.source + ":" + std::to_string(rec.line) + ": expected " +
                                std::to_string(header.size()) + " fields, found " +
                                std::to_string(rec.fields.size()));
        continue;
      }
      CorpusRow row;
      row.line = rec.line;
      for (std::size_t i = 0; i < header.size(); ++i) {
        if (i == *id_col) {
          row.id = rec.fields[i];
        } else if (i == *title_col) {
          row.title = rec.fields[i];
        } else if (body_col && i == *body_col) {
          row.body = rec.fields[i];
        } else {
          row.metadata[header[i]] = rec.fields[i];
        }
      }
      sink.add(std::move(row));
    }
  } catch (const InputError& e) {
    sink.problems.push_back(sink.source + ": " + e.what());
  }
}

void read_jsonl_corpus(std::istream& in, RowSink& sink) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = sink.source + ":" + std::to_string(line_no) + ": ";
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::exception&) {
      sink.problems.push_back(where + "not valid JSON");
      continue;
    }
    if (!obj.is_object()) {
      sink.problems.push_back(where + "expected a JSON object");
      continue;
    }
    const auto id = obj.find("id");
    const auto title = obj.find("title");
    if (id == obj.end() || !id->is_string() || title == obj.end() || !title->is_string()) {
      sink.problems.push_back(where + "\"id\" and \"title\" must be strings");
      continue;
    }
    CorpusRow row;
    row.line = line_no;
    row.id = id->get<std::string>();
    row.title = title->get<std::string>();
    bool ok = true;
    for (const auto& [key, value] : obj.items()) {
      if (key == "id" || key == "title") continue;
      if (key == "body") {
        if (!value.is_string()) {
          sink.problems.push_back(where + "\"body\" must be a string");
          ok = false;
          break;
        }
        row.body = value.get<std::string>();
        continue;
      }
      row.metadata[key] = value.is_string() ? value.get<std::string>() : value.dump();
    }
    if (ok) sink.add(std::move(row));
  }
}

}  // namespace

CorpusFormat parse_corpus_format(std::string_view name) {
  if (name == "csv") return CorpusFormat::csv;
  if (name == "jsonl") return CorpusFormat::jsonl;
  throw InputError("unknown corpus format '" + std::string(name) + "' (expected csv or jsonl)");
}

CorpusFormat guess_corpus_format(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  return (ext == ".jsonl" || ext == ".ndjson") ? CorpusFormat::jsonl : CorpusFormat::csv;
}

std::vector<CorpusRow> read_corpus(const std::filesystem::path& path, CorpusFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot open corpus " + path.string());
  RowSink sink;
  sink.source = path.string();
  if (format == CorpusFormat::csv) {
    read_csv_corpus(in, sink);
  } else {
    read_jsonl_corpus(in, sink);
  }
  if (!sink.problems.empty()) {
    throw ReportError("ingestion aborted: " + std::to_string(sink.problems.size()) + " bad row(s) in " +
                          path.string(),
                      std::move(sink.problems));
  }
  return std::move(sink.rows);
}

Question make_question(std::string id, std::string text, const PreprocessConfig& config,
                       const EmbeddingProvider& provider) {
  Question q;
  q.id = std::move(id);
  q.text = std::move(text);
  q.analyzed = analyze(q.text, config);
  q.tf = tf_vectorize(q.analyzed.stems);
  q.embedding = provider.embed(q.analyzed.terms);
  q.oov_count = provider.count_oov(q.analyzed.terms);
  return q;
}

QuestionIndex ingest_corpus(const std::filesystem::path& path, const IngestOptions& options,
                            const PreprocessConfig& config, const EmbeddingProvider& provider) {
  auto rows = read_corpus(path, options.format);
  std::vector<Question> questions;
  questions.reserve(rows.size());
  for (auto& row : rows) {
    std::string text = row.title;
    if (options.include_body && !row.body.empty()) {
      text += ' ';
      text += row.body;
    }
    auto q = make_question(std::move(row.id), std::move(text), config, provider);
    q.metadata = std::move(row.metadata);
    questions.push_back(std::move(q));
  }
  return QuestionIndex(std::move(questions), config, provider.id(), provider.dimension());
}

void save_index(const QuestionIndex& index, const std::filesystem::path& path) {
  const auto& cfg = index.preprocess_config();
  json punctuation = json::array();
  for (char32_t c : cfg.punctuation) punctuation.push_back(static_cast<std::uint32_t>(c));

  json questions = json::array();
  for (const auto& q : index.questions()) {
    json tf = json::array();
    for (const auto& [term, n] : q.tf.entries()) tf.push_back(json::array({term, n}));
    questions.push_back({
        {"id", q.id},
        {"text", q.text},
        {"metadata", q.metadata},
        {"terms", tokens_json(q.analyzed.terms)},
        {"stems", tokens_json(q.analyzed.stems)},
        {"tf", std::move(tf)},
        {"embedding", std::vector<double>(q.embedding.values().begin(), q.embedding.values().end())},
        {"oov_count", q.oov_count},
    });
  }

  json doc = {
      {"format", kIndexFormat},
      {"format_version", kIndexFormatVersion},
      {"fingerprint", index.fingerprint()},
      {"preprocess",
       {
           {"stemmer", std::string(to_string(cfg.stemmer))},
           {"punctuation", std::move(punctuation)},
           {"stopwords", cfg.stopwords},
           {"stopwords_sha256", cfg.stopword_hash()},
           {"fingerprint", index.preprocess_fingerprint()},
       }},
      {"embedding", {{"provider_id", index.provider_id()}, {"dimension", index.embedding_dimension()}}},
      {"vocabulary_size", index.vocabulary_size()},
      {"question_count", index.size()},
      {"questions", std::move(questions)},
  };
  write_atomically(path, doc.dump() + "\n");
}

QuestionIndex load_index(const std::filesystem::path& path) {
  const json doc = read_json_file(path, "index");
  check_header(doc, kIndexFormat, kIndexFormatVersion, path);
  try {
    const auto& pre = doc.at("preprocess");
    PreprocessConfig cfg;
    cfg.stemmer = parse_stemmer_id(pre.at("stemmer").get<std::string>());
    for (const auto& c : pre.at("punctuation")) cfg.punctuation.insert(static_cast<char32_t>(c.get<std::uint32_t>()));
    cfg.stopwords = pre.at("stopwords").get<std::set<std::string>>();

    std::vector<Question> questions;
    const auto& items = doc.at("questions");
    questions.reserve(items.size());
    for (const auto& item : items) {
      Question q;
      q.id = item.at("id").get<std::string>();
      q.text = item.at("text").get<std::string>();
      q.metadata = item.at("metadata").get<std::map<std::string, std::string>>();
      q.analyzed.terms = item.at("terms").get<TokenList>();
      q.analyzed.stems = item.at("stems").get<TokenList>();
      std::vector<TermFrequencyVector::Entry> entries;
      for (const auto& e : item.at("tf")) {
        entries.emplace_back(e.at(0).get<std::string>(), e.at(1).get<std::uint32_t>());
      }
      q.tf = TermFrequencyVector(std::move(entries));
      q.embedding = DocumentEmbedding(item.at("embedding").get<std::vector<double>>());
      q.oov_count = item.at("oov_count").get<std::size_t>();
      questions.push_back(std::move(q));
    }
    const auto& emb = doc.at("embedding");
    QuestionIndex index(std::move(questions), std::move(cfg), emb.at("provider_id").get<std::string>(),
                        emb.at("dimension").get<std::size_t>());

    if (index.preprocess_fingerprint() != pre.at("fingerprint").get<std::string>()) {
      throw IntegrityError(path.string() + ": preprocessing fingerprint does not match its configuration");
    }
    if (index.fingerprint() != doc.at("fingerprint").get<std::string>()) {
      throw IntegrityError(path.string() + ": index fingerprint mismatch (file corrupted or edited)");
    }
    return index;
  } catch (const json::exception& e) {
    throw SchemaError(path.string() + ": malformed index: " + e.what());
  } catch (const ContractViolation& e) {
    throw SchemaError(path.string() + ": malformed index: " + e.what());
  }
}

std::vector<std::string> config_warnings(const QuestionIndex& index, const PreprocessConfig& active) {
  std::vector<std::string> warnings;
  const auto& stored = index.preprocess_config();
  if (stored.stopword_hash() != active.stopword_hash()) {
    warnings.push_back("stale configuration: the index was built with a different stop-word list (" +
                       stored.stopword_hash().substr(0, 12) + " vs active " +
                       active.stopword_hash().substr(0, 12) + "); rebuild the index to apply it");
  }
  if (stored.punctuation != active.punctuation) {
    warnings.push_back("stale configuration: the index was built with a different punctuation set");
  }
  if (stored.stemmer != active.stemmer) {
    warnings.push_back("stale configuration: the index was built with stemmer '" +
                       std::string(to_string(stored.stemmer)) + "'");
  }
  return warnings;
}

void save_model(const CalibrationModel& model, const std::filesystem::path& path) {
  json sets = json::array();
  for (const auto& s : model.per_set) {
    json curve = json::array();
    for (const auto& p : s.curve.points) curve.push_back({{"lambda", p.lambda}, {"ssrd", p.ssrd}});
    sets.push_back({
        {"probe_query", s.probe_query},
        {"ranked_file", s.ranked_file},
        {"set_size", s.set_size},
        {"best_lambda", s.best_lambda},
        {"curve", std::move(curve)},
    });
  }
  json doc = {
      {"format", kModelFormat},
      {"format_version", kModelFormatVersion},
      {"optimal_lambda", model.optimal_lambda},
      {"step_size", model.step_size},
      {"index_fingerprint", model.index_fingerprint},
      {"created_at", model.created_at},
      {"fingerprint", model.fingerprint()},
      {"sets", std::move(sets)},
  };
  write_atomically(path, doc.dump(2) + "\n");
}

CalibrationModel load_model(const std::filesystem::path& path) {
  const json doc = read_json_file(path, "model");
  check_header(doc, kModelFormat, kModelFormatVersion, path);
  try {
    CalibrationModel model;
    model.optimal_lambda = doc.at("optimal_lambda").get<double>();
    model.step_size = doc.at("step_size").get<double>();
    model.index_fingerprint = doc.at("index_fingerprint").get<std::string>();
    model.created_at = doc.at("created_at").get<std::string>();
    for (const auto& s : doc.at("sets")) {
      SetCalibration set;
      set.probe_query = s.at("probe_query").get<std::string>();
      set.ranked_file = s.at("ranked_file").get<std::string>();
      set.set_size = s.at("set_size").get<std::size_t>();
      set.best_lambda = s.at("best_lambda").get<double>();
      for (const auto& p : s.at("curve")) {
        set.curve.points.push_back({p.at("lambda").get<double>(), p.at("ssrd").get<std::int64_t>()});
      }
      model.per_set.push_back(std::move(set));
    }
    if (!(model.optimal_lambda >= 0.0 && model.optimal_lambda <= 1.0)) {
      throw SchemaError(path.string() + ": optimal_lambda outside [0, 1]");
    }
    if (model.fingerprint() != doc.at("fingerprint").get<std::string>()) {
      throw IntegrityError(path.string() + ": model fingerprint mismatch (file corrupted or edited)");
    }
    return model;
  } catch (const json::exception& e) {
    throw SchemaError(path.string() + ": malformed model: " + e.what());
  }
}

std::optional<std::string> model_staleness(const CalibrationModel& model, const QuestionIndex& index) {
  if (model.index_fingerprint == index.fingerprint()) return std::nullopt;
  return "stale model: calibrated against index " + model.index_fingerprint.substr(0, 12) +
         " but the loaded index is " + index.fingerprint().substr(0, 12) + "; recalibrate";
}

}  // namespace qsuggest
