#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qsuggest/calibration.hpp"
#include "qsuggest/embedding.hpp"
#include "qsuggest/index.hpp"
#include "qsuggest/preprocess.hpp"

namespace qsuggest {

enum class CorpusFormat { csv, jsonl };

CorpusFormat parse_corpus_format(std::string_view name);
// By file extension: ".jsonl"/".ndjson" are JSONL, anything else CSV.
CorpusFormat guess_corpus_format(const std::filesystem::path& path);

struct IngestOptions {
  CorpusFormat format = CorpusFormat::csv;
  // Score "title body" instead of the title alone.
  bool include_body = false;
};

// A raw corpus row before preprocessing.
struct CorpusRow {
  std::size_t line = 0;
  std::string id;
  std::string title;
  std::string body;
  std::map<std::string, std::string> metadata;
};

// Parses the corpus without preprocessing it. CSV needs a header with "id"
// and "title" (and optionally "body"); JSONL needs string fields "id" and
// "title". Other columns/fields are kept as metadata. Every malformed row,
// empty id and duplicate id is collected into a single ReportError.
std::vector<CorpusRow> read_corpus(const std::filesystem::path& path, CorpusFormat format);

// Builds a question with all derived representations.
Question make_question(std::string id, std::string text, const PreprocessConfig& config,
                       const EmbeddingProvider& provider);

// All-or-nothing: any bad row aborts ingestion.
QuestionIndex ingest_corpus(const std::filesystem::path& path, const IngestOptions& options,
                            const PreprocessConfig& config, const EmbeddingProvider& provider);

// Index file: a JSON document {"format": "qsuggest-index", "format_version": 1,
// "fingerprint": ..., "preprocess": {...}, "embedding": {...},
// "vocabulary_size": n, "questions": [...]}. Doubles are written in shortest
// round-trip form, so a reload is bit-exact.
inline constexpr int kIndexFormatVersion = 1;
void save_index(const QuestionIndex& index, const std::filesystem::path& path);
// Throws NotFoundError, SchemaError (wrong format or version, truncated or
// malformed JSON) or IntegrityError (recomputed fingerprint differs).
QuestionIndex load_index(const std::filesystem::path& path);

// Warnings for an index used alongside a different active preprocessing config.
std::vector<std::string> config_warnings(const QuestionIndex& index, const PreprocessConfig& active);

// Model file: JSON {"format": "qsuggest-model", "format_version": 1,
// "optimal_lambda", "step_size", "index_fingerprint", "created_at",
// "fingerprint", "sets": [{"probe_query", "ranked_file", "set_size",
// "best_lambda", "curve": [{"lambda", "ssrd"}...]}]}.
inline constexpr int kModelFormatVersion = 1;
void save_model(const CalibrationModel& model, const std::filesystem::path& path);
CalibrationModel load_model(const std::filesystem::path& path);

// Set when the model was calibrated against a different index.
std::optional<std::string> model_staleness(const CalibrationModel& model, const QuestionIndex& index);

}  // namespace qsuggest
