#include "qsuggest/evalreport.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "qsuggest/csv.hpp"
#include "qsuggest/errors.hpp"
#include "qsuggest/fusion.hpp"
#include "qsuggest/store.hpp"

namespace qsuggest {
namespace {

bool on_tenths(double x) { return std::round(x * 10.0) / 10.0 == x; }

std::string fixed(double x, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
  return buf;
}

std::string lambda_text(double x) { return on_tenths(x) ? fixed(x, 1) : csv::number(x); }

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

}  // namespace

std::size_t Histogram::bin_of(double score) {
  if (!(score >= 0.0 && score <= 1.0)) throw ContractViolation("histogram score outside [0, 1]");
  auto i = static_cast<std::size_t>(std::floor(score * 10.0));
  if (i >= kBins) return kBins - 1;
  // floor(score * 10) can land one bin off near an edge; the edges decide.
  while (i > 0 && score < edge(i)) --i;
  while (i + 1 < kBins && score >= edge(i + 1)) ++i;
  return i;
}

void Histogram::add(double score) {
  ++counts[bin_of(score)];
  ++total;
}

std::string ScoreMethod::describe() const {
  switch (kind) {
    case Kind::syntactic: return "syntactic";
    case Kind::semantic: return "semantic";
    case Kind::combined: return "combined(lambda=" + lambda_text(lambda) + ")";
  }
  return "?";
}

ScoreMethod parse_score_method(std::string_view name, double lambda) {
  if (name == "syntactic") return ScoreMethod::syntactic();
  if (name == "semantic") return ScoreMethod::semantic();
  if (name == "combined") return ScoreMethod::combined(Lambda(lambda));
  throw InputError("unknown method '" + std::string(name) + "' (expected syntactic, semantic or combined)");
}

Histogram score_histogram(const SearchContext& context, std::string_view probe, ScoreMethod method) {
  if (context.index().empty()) throw InputError("cannot build a histogram over an empty index");
  const auto scores = score_all(context.encode(probe), context.index());
  Histogram h;
  for (const auto& s : scores) {
    switch (method.kind) {
      case ScoreMethod::Kind::syntactic: h.add(s.s1); break;
      case ScoreMethod::Kind::semantic: h.add(s.s2); break;
      case ScoreMethod::Kind::combined: h.add(combine(s.s1, s.s2, Lambda(method.lambda))); break;
    }
  }
  return h;
}

double random_ssrd_expectation(std::size_t n) {
  if (n < 2) throw ContractViolation("random baseline needs sets of at least 2 items");
  const auto m = static_cast<double>(n);
  return (m * m * m - m) / 6.0;
}

double random_baseline_ssrd(std::span<const std::size_t> set_sizes) {
  if (set_sizes.empty()) throw ContractViolation("random baseline needs at least one set");
  double sum = 0.0;
  for (auto n : set_sizes) sum += random_ssrd_expectation(n);
  return sum / static_cast<double>(set_sizes.size());
}

double error_reduction_percent(double mean_ssrd, double baseline_ssrd) {
  if (!(baseline_ssrd > 0.0)) throw ContractViolation("baseline SSRD must be positive");
  return 100.0 * (baseline_ssrd - mean_ssrd) / baseline_ssrd;
}

const MethodRow& ErrorReductionReport::row(std::string_view method) const {
  for (const auto& r : rows) {
    if (r.method == method) return r;
  }
  throw ContractViolation("report has no row '" + std::string(method) + "'");
}

ErrorReductionReport error_reduction_report(std::span<const RankedSet> sets, const SearchContext& context,
                                            const CalibrationModel& model, std::string data_set) {
  if (sets.empty()) throw InputError("evaluation needs at least one ranked set");
  for (const auto& set : sets) {
    const auto problems = validate_ranked_set(set, context.index());
    if (!problems.empty()) throw ReportError("evaluation aborted: invalid ranked set", problems);
  }

  ErrorReductionReport report;
  report.data_set = std::move(data_set);
  report.lambda_used = model.optimal_lambda;
  if (auto stale = model_staleness(model, context.index())) report.warnings.push_back(*stale);

  const Lambda optimal(model.optimal_lambda);
  std::vector<std::size_t> sizes;
  double sum_s1 = 0, sum_s2 = 0, sum_l = 0;
  for (const auto& set : sets) {
    SetRow row{set.probe_query, set.source, set.assignments.size(), 0, 0, 0};
    row.ssrd_s1 = evaluate_lambda(set, context, Lambda::syntactic());
    row.ssrd_s2 = evaluate_lambda(set, context, Lambda::semantic());
    row.ssrd_lambda = evaluate_lambda(set, context, optimal);
    sum_s1 += static_cast<double>(row.ssrd_s1);
    sum_s2 += static_cast<double>(row.ssrd_s2);
    sum_l += static_cast<double>(row.ssrd_lambda);
    sizes.push_back(row.set_size);
    report.per_set.push_back(std::move(row));
  }

  const double m = static_cast<double>(sets.size());
  const double baseline = random_baseline_ssrd(sizes);
  auto make = [&](std::string name, double lambda, double sum) {
    const double mean = sum / m;
    return MethodRow{std::move(name), lambda, mean, baseline, error_reduction_percent(mean, baseline)};
  };
  report.rows.push_back(make("S1", 1.0, sum_s1));
  report.rows.push_back(make("S2", 0.0, sum_s2));
  report.rows.push_back(make("S_lambda", model.optimal_lambda, sum_l));
  return report;
}

ErrorReductionReport error_reduction_report(const DriverManifest& manifest, const SearchContext& context,
                                            const CalibrationModel& model, std::string data_set) {
  const auto sets = load_ranked_sets(manifest, context.index());
  return error_reduction_report(sets, context, model, std::move(data_set));
}

std::string format_report_table(const ErrorReductionReport& report) {
  const std::size_t first = std::max<std::size_t>(10, report.data_set.size() + 2);
  std::string out;
  out += pad("Data Set", first) + pad("S1", 10) + pad("S2", 10) + pad("S_lambda", 10) + "Optimal λ\n";
  out += pad(report.data_set, first);
  for (const char* m : {"S1", "S2", "S_lambda"}) out += pad(fixed(report.row(m).error_reduction_percent, 2), 10);
  out += on_tenths(report.lambda_used) ? fixed(report.lambda_used, 1) : fixed(report.lambda_used, 4);
  out += "\n";
  out += "(error reduction %, baseline mean SSRD " + fixed(report.rows.front().baseline_ssrd, 2) + " over " +
         std::to_string(report.per_set.size()) + " set(s))\n";
  return out;
}

std::string format_report_csv(const ErrorReductionReport& report) {
  std::string out = "data_set,method,lambda,mean_ssrd,baseline_ssrd,error_reduction_percent\n";
  for (const auto& r : report.rows) {
    out += csv::join({report.data_set, r.method, csv::number(r.lambda), csv::number(r.mean_ssrd),
                      csv::number(r.baseline_ssrd), csv::number(r.error_reduction_percent)});
    out += "\n";
  }
  return out;
}

std::string format_set_csv(const ErrorReductionReport& report) {
  std::string out = "probe_query,ranked_file,set_size,ssrd_s1,ssrd_s2,ssrd_lambda\n";
  for (const auto& s : report.per_set) {
    out += csv::join({s.probe_query, s.ranked_file, std::to_string(s.set_size), std::to_string(s.ssrd_s1),
                      std::to_string(s.ssrd_s2), std::to_string(s.ssrd_lambda)});
    out += "\n";
  }
  return out;
}

std::string format_ssrd_curve(const SsrdCurve& curve) {
  if (curve.points.empty()) throw ContractViolation("empty SSRD curve");
  std::string out = "lambda,ssrd\n";
  for (const auto& p : curve.points) out += lambda_text(p.lambda) + "," + std::to_string(p.ssrd) + "\n";
  return out;
}

void export_ssrd_curve(const SsrdCurve& curve, const std::filesystem::path& path) {
  write_text_file(path, format_ssrd_curve(curve));
}

std::string format_histogram(const Histogram& histogram) {
  std::string out = "bin_start,bin_end,count\n";
  for (std::size_t i = 0; i < Histogram::kBins; ++i) {
    out += fixed(Histogram::edge(i), 1) + "," + fixed(Histogram::edge(i + 1), 1) + "," +
           std::to_string(histogram.counts[i]) + "\n";
  }
  return out;
}

void export_histogram(const Histogram& histogram, const std::filesystem::path& path) {
  write_text_file(path, format_histogram(histogram));
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path.string());
  out << content;
  if (!out.flush()) throw InputError("failed writing " + path.string());
}

}  // namespace qsuggest
