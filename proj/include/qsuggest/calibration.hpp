#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qsuggest/context.hpp"
#include "qsuggest/fusion.hpp"

namespace qsuggest {

using RankMap = std::map<std::string, std::int64_t>;

// Sum over assigned ids of (predicted - assigned)^2. Ids only in `predicted`
// contribute nothing. Throws ContractViolation if an assigned id has no prediction.
std::int64_t ssrd(const RankMap& predicted, const RankMap& assigned);

// Admin ranking of a question subset against one probe query.
struct RankedSet {
  std::string probe_query;
  std::vector<std::pair<std::string, std::int64_t>> assignments;  // file order
  std::string source;  // ranked-file label, for messages and the model

  std::vector<std::string> ids() const;
  RankMap assigned() const;
};

// Checks the ranked-set invariants (>= 2 rows, distinct positive ranks, unique
// ids, ids present in the index). Returns one message per violation.
std::vector<std::string> validate_ranked_set(const RankedSet& set, const QuestionIndex& index);

// Ranked file: CSV with header "question_id,assigned_rank". Throws ReportError
// naming the file and row for malformed input; does not check the index.
RankedSet load_ranked_set(const std::filesystem::path& path, std::string probe_query);

struct ManifestEntry {
  std::string probe_query;
  std::string ranked_file_label;      // as written in the manifest
  std::filesystem::path ranked_file;  // resolved against the manifest's directory
};

struct DriverManifest {
  std::vector<ManifestEntry> sets;
};

// Manifest: CSV with header "probe_query,ranked_file". Throws InputError if it
// lists no sets.
DriverManifest load_manifest(const std::filesystem::path& path);

// Loads and validates every ranked file; any problem aborts with a ReportError
// listing all of them.
std::vector<RankedSet> load_ranked_sets(const DriverManifest& manifest, const QuestionIndex& index);

// Grid points 0, step, 2 step, ... computed as i * step (snapped to 1e-12),
// with 1.0 appended when step does not divide 1.
std::vector<double> lambda_grid(double step);

struct SsrdPoint {
  double lambda = 0.0;
  std::int64_t ssrd = 0;

  friend bool operator==(const SsrdPoint&, const SsrdPoint&) = default;
};

struct SsrdCurve {
  std::vector<SsrdPoint> points;

  std::int64_t min_ssrd() const;
  std::int64_t at(double lambda) const;  // exact grid lookup; throws if absent
  friend bool operator==(const SsrdCurve&, const SsrdCurve&) = default;
};

struct SetCalibration {
  std::string probe_query;
  std::string ranked_file;
  std::size_t set_size = 0;
  double best_lambda = 0.0;
  SsrdCurve curve;

  friend bool operator==(const SetCalibration&, const SetCalibration&) = default;
};

struct CalibrationModel {
  double optimal_lambda = 0.5;
  double step_size = 0.1;
  std::vector<SetCalibration> per_set;
  std::string created_at;  // ISO-8601 UTC
  std::string index_fingerprint;

  // SHA-256 over every field except created_at.
  std::string fingerprint() const;
  bool same_values(const CalibrationModel& other) const;
};

// Predicted ranks for the set's questions only, at a fixed lambda.
RankMap predict_ranks(const RankedSet& set, const SearchContext& context, Lambda lambda);

std::int64_t evaluate_lambda(const RankedSet& set, const SearchContext& context, Lambda lambda);

struct BestLambda {
  double lambda = 0.0;
  SsrdCurve curve;
};

// Scores the set once, then sweeps the grid. Returns the smallest grid lambda
// achieving the minimum SSRD.
BestLambda find_best_lambda(const RankedSet& set, const SearchContext& context, double step_size);

// Per-set best lambda, averaged over sets.
CalibrationModel calibrate(std::span<const RankedSet> sets, const SearchContext& context,
                           double step_size);
CalibrationModel calibrate(const DriverManifest& manifest, const SearchContext& context,
                           double step_size);

std::string utc_timestamp_now();

}  // namespace qsuggest
