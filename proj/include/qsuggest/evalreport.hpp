#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qsuggest/calibration.hpp"
#include "qsuggest/context.hpp"

namespace qsuggest {

// Ten uniform bins over [0, 1]; the last bin also holds 1.0.
struct Histogram {
  static constexpr std::size_t kBins = 10;

  std::array<std::uint64_t, kBins> counts{};
  std::uint64_t total = 0;

  static double edge(std::size_t i) { return static_cast<double>(i) / 10.0; }
  static std::size_t bin_of(double score);
  void add(double score);
};

struct ScoreMethod {
  enum class Kind { syntactic, semantic, combined };

  Kind kind = Kind::syntactic;
  double lambda = 0.5;  // combined only

  static ScoreMethod syntactic() { return {Kind::syntactic, 1.0}; }
  static ScoreMethod semantic() { return {Kind::semantic, 0.0}; }
  static ScoreMethod combined(Lambda l) { return {Kind::combined, l.value()}; }
  std::string describe() const;
};

// "syntactic", "semantic" or "combined" (the latter takes `lambda`).
ScoreMethod parse_score_method(std::string_view name, double lambda);

// Scores every indexed question against the probe. Throws InputError on an
// empty index.
Histogram score_histogram(const SearchContext& context, std::string_view probe, ScoreMethod method);

// Expected SSRD of a uniformly random ranking of n items: (n^3 - n) / 6.
double random_ssrd_expectation(std::size_t n);
// Mean of the above over sets. Every size must be >= 2.
double random_baseline_ssrd(std::span<const std::size_t> set_sizes);

// 100 (baseline - mean) / baseline.
double error_reduction_percent(double mean_ssrd, double baseline_ssrd);

struct MethodRow {
  std::string method;  // "S1", "S2", "S_lambda"
  double lambda = 0.0;
  double mean_ssrd = 0.0;
  double baseline_ssrd = 0.0;
  double error_reduction_percent = 0.0;
};

struct SetRow {
  std::string probe_query;
  std::string ranked_file;
  std::size_t set_size = 0;
  std::int64_t ssrd_s1 = 0;
  std::int64_t ssrd_s2 = 0;
  std::int64_t ssrd_lambda = 0;
};

struct ErrorReductionReport {
  std::string data_set;
  double lambda_used = 0.0;
  std::vector<MethodRow> rows;  // S1, S2, S_lambda
  std::vector<SetRow> per_set;
  std::vector<std::string> warnings;

  const MethodRow& row(std::string_view method) const;
};

// Evaluates every set at lambda 1 (S1), 0 (S2) and the model's optimum. A
// model calibrated against another index only adds a warning.
ErrorReductionReport error_reduction_report(std::span<const RankedSet> sets, const SearchContext& context,
                                            const CalibrationModel& model, std::string data_set);
ErrorReductionReport error_reduction_report(const DriverManifest& manifest, const SearchContext& context,
                                            const CalibrationModel& model, std::string data_set);

// Plain-text table: Data Set, S1, S2, S_lambda, Optimal lambda.
std::string format_report_table(const ErrorReductionReport& report);
// Header "data_set,method,lambda,mean_ssrd,baseline_ssrd,error_reduction_percent".
std::string format_report_csv(const ErrorReductionReport& report);
// Header "probe_query,ranked_file,set_size,ssrd_s1,ssrd_s2,ssrd_lambda".
std::string format_set_csv(const ErrorReductionReport& report);

// Header "lambda,ssrd". Lambdas on a tenths grid print with one decimal.
std::string format_ssrd_curve(const SsrdCurve& curve);
void export_ssrd_curve(const SsrdCurve& curve, const std::filesystem::path& path);

// Header "bin_start,bin_end,count".
std::string format_histogram(const Histogram& histogram);
void export_histogram(const Histogram& histogram, const std::filesystem::path& path);

// Writes text to a file, throwing InputError if it cannot.
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace qsuggest
