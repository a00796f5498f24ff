#include "qsuggest/session.hpp"

#include "qsuggest/errors.hpp"
#include "qsuggest/store.hpp"

namespace qsuggest {

Session open_session(const SessionOptions& options) {
  auto index = std::make_shared<const QuestionIndex>(load_index(options.index_path));
  auto provider = provider_for_index(*index, options.word_vectors_path);

  Session session;
  session.context = std::make_shared<const SearchContext>(index, std::move(provider));
  if (options.active_config) {
    for (auto& w : config_warnings(*index, *options.active_config)) session.warnings.push_back(std::move(w));
  }

  if (options.model_path && std::filesystem::exists(*options.model_path)) {
    session.model = load_model(*options.model_path);
    if (auto stale = model_staleness(*session.model, *index)) {
      session.stale_model = true;
      session.warnings.push_back(*stale);
    }
    session.lambda = session.model->optimal_lambda;
  } else if (!options.lambda_override) {
    session.warnings.push_back("no calibration model" +
                               (options.model_path ? " at " + options.model_path->string() : std::string()) +
                               "; using the uncalibrated default lambda 0.5");
  }
  if (options.lambda_override) {
    const double l = *options.lambda_override;
    if (!(l >= 0.0 && l <= 1.0)) throw InputError("--lambda must lie in [0, 1], got " + std::to_string(l));
    session.lambda = l;
  }
  return session;
}

SuggestionResult suggest(const Session& session, std::string_view query, Cutoff cutoff) {
  auto result = rank_all(session.context->encode(query), session.index(), Lambda(session.lambda));
  return apply_cutoff(std::move(result), cutoff);
}

}  // namespace qsuggest
