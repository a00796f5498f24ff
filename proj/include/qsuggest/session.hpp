#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qsuggest/calibration.hpp"
#include "qsuggest/context.hpp"
#include "qsuggest/fusion.hpp"

namespace qsuggest {

// Lambda used when no calibration model is available.
inline constexpr double kFallbackLambda = 0.5;

struct SessionOptions {
  std::filesystem::path index_path;
  std::optional<std::filesystem::path> model_path;  // a missing file falls back to kFallbackLambda
  std::optional<std::filesystem::path> word_vectors_path;
  std::optional<double> lambda_override;
  // Config the caller would preprocess with; differences from the index's own
  // config produce warnings.
  std::optional<PreprocessConfig> active_config;
};

// Everything needed to answer queries: loaded once, then read-only.
struct Session {
  std::shared_ptr<const SearchContext> context;
  std::optional<CalibrationModel> model;
  double lambda = kFallbackLambda;
  bool stale_model = false;
  std::vector<std::string> warnings;

  const QuestionIndex& index() const { return context->index(); }
};

// Loads the index, rebuilds its embedding provider and resolves lambda:
// explicit override, else the model's optimum, else the fallback (with a warning).
Session open_session(const SessionOptions& options);

// Ranks the whole index against the query and applies the cutoff.
SuggestionResult suggest(const Session& session, std::string_view query, Cutoff cutoff);

}  // namespace qsuggest
