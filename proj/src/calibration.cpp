#include "qsuggest/calibration.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <set>

#include "qsuggest/csv.hpp"
#include "qsuggest/errors.hpp"
#include "qsuggest/fingerprint.hpp"

namespace qsuggest {
namespace {

bool parse_rank(std::string_view s, std::int64_t& out) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

std::string located(const std::string& file, std::size_t line, const std::string& msg) {
  return file + ":" + std::to_string(line) + ": " + msg;
}

}  // namespace

std::int64_t ssrd(const RankMap& predicted, const RankMap& assigned) {
  std::int64_t total = 0;
  for (const auto& [id, rank] : assigned) {
    const auto it = predicted.find(id);
    if (it == predicted.end()) {
      throw ContractViolation("no predicted rank for assigned question '" + id + "'");
    }
    const std::int64_t d = it->second - rank;
    total += d * d;
  }
  return total;
}

std::vector<std::string> RankedSet::ids() const {
  std::vector<std::string> out;
  out.reserve(assignments.size());
  for (const auto& [id, rank] : assignments) out.push_back(id);
  return out;
}

RankMap RankedSet::assigned() const {
  return RankMap(assignments.begin(), assignments.end());
}

std::vector<std::string> validate_ranked_set(const RankedSet& set, const QuestionIndex& index) {
  std::vector<std::string> problems;
  const std::string& src = set.source;
  if (set.assignments.size() < 2) {
    problems.push_back(src + ": needs at least 2 ranked questions, found " +
                       std::to_string(set.assignments.size()));
  }
  std::set<std::string_view> ids;
  std::set<std::int64_t> ranks;
  for (const auto& [id, rank] : set.assignments) {
    if (!ids.insert(id).second) problems.push_back(src + ": question '" + id + "' is ranked twice");
    if (rank < 1) problems.push_back(src + ": question '" + id + "' has non-positive rank");
    if (!ranks.insert(rank).second) {
      problems.push_back(src + ": rank " + std::to_string(rank) + " is assigned more than once");
    }
    if (index.find(id) == nullptr) problems.push_back(src + ": question '" + id + "' is not in the index");
  }
  return problems;
}

RankedSet load_ranked_set(const std::filesystem::path& path, std::string probe_query) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot open ranked file " + path.string());
  RankedSet set;
  set.probe_query = std::move(probe_query);
  set.source = path.string();

  std::vector<std::string> problems;
  csv::Reader reader(in);
  csv::Record rec;
  try {
    if (!reader.next(rec)) throw ReportError("invalid ranked file", {set.source + ": file is empty"});
    if (rec.fields != std::vector<std::string>{"question_id", "assigned_rank"}) {
      problems.push_back(located(set.source, rec.line, "header must be \"question_id,assigned_rank\""));
    }
    while (reader.next(rec)) {
      if (rec.fields.size() != 2) {
        problems.push_back(located(set.source, rec.line, "expected 2 fields, found " +
                                                             std::to_string(rec.fields.size())));
        continue;
      }
      std::int64_t rank = 0;
      if (rec.fields[0].empty()) {
        problems.push_back(located(set.source, rec.line, "empty question_id"));
      } else if (!parse_rank(rec.fields[1], rank) || rank < 1) {
        problems.push_back(located(set.source, rec.line,
                                   "assigned_rank '" + rec.fields[1] + "' is not an integer >= 1"));
      } else {
        set.assignments.emplace_back(rec.fields[0], rank);
      }
    }
  } catch (const ReportError&) {
    throw;
  } catch (const InputError& e) {
    problems.push_back(set.source + ": " + e.what());
  }
  if (!problems.empty()) throw ReportError("invalid ranked file " + set.source, std::move(problems));
  return set;
}

DriverManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot open manifest " + path.string());
  const auto base = path.parent_path();
  const std::string src = path.string();

  DriverManifest manifest;
  std::vector<std::string> problems;
  csv::Reader reader(in);
  csv::Record rec;
  if (!reader.next(rec)) throw InputError(src + ": manifest is empty; it must list at least one set");
  if (rec.fields != std::vector<std::string>{"probe_query", "ranked_file"}) {
    problems.push_back(located(src, rec.line, "header must be \"probe_query,ranked_file\""));
  }
  while (reader.next(rec)) {
    if (rec.fields.size() != 2) {
      problems.push_back(located(src, rec.line, "expected 2 fields, found " + std::to_string(rec.fields.size())));
      continue;
    }
    if (rec.fields[1].empty()) {
      problems.push_back(located(src, rec.line, "empty ranked_file"));
      continue;
    }
    std::filesystem::path ranked(rec.fields[1]);
    if (ranked.is_relative()) ranked = base / ranked;
    manifest.sets.push_back(ManifestEntry{rec.fields[0], rec.fields[1], ranked});
  }
  if (!problems.empty()) throw ReportError("invalid manifest " + src, std::move(problems));
  if (manifest.sets.empty()) throw InputError(src + ": manifest lists no sets");
  return manifest;
}

std::vector<RankedSet> load_ranked_sets(const DriverManifest& manifest, const QuestionIndex& index) {
  if (manifest.sets.empty()) throw InputError("manifest lists no sets");
  std::vector<RankedSet> sets;
  std::vector<std::string> problems;
  for (const auto& entry : manifest.sets) {
    try {
      auto set = load_ranked_set(entry.ranked_file, entry.probe_query);
      set.source = entry.ranked_file_label;
      auto issues = validate_ranked_set(set, index);
      problems.insert(problems.end(), issues.begin(), issues.end());
      sets.push_back(std::move(set));
    } catch (const ReportError& e) {
      problems.insert(problems.end(), e.problems().begin(), e.problems().end());
    } catch (const InputError& e) {
      problems.push_back(e.what());
    }
  }
  if (!problems.empty()) throw ReportError("calibration aborted: invalid ranked files", std::move(problems));
  return sets;
}

std::vector<double> lambda_grid(double step) {
  if (!(step > 0.0 && step <= 1.0)) {
    throw InputError("step size must lie in (0, 1], got " + std::to_string(step));
  }
  const auto n = static_cast<std::size_t>(std::floor(1.0 / step + 1e-9));
  std::vector<double> grid;
  grid.reserve(n + 2);
  for (std::size_t i = 0; i <= n; ++i) {
    const double raw = static_cast<double>(i) * step;
    grid.push_back(std::min(1.0, std::round(raw * 1e12) / 1e12));
  }
  if (grid.back() < 1.0) grid.push_back(1.0);
  return grid;
}

std::int64_t SsrdCurve::min_ssrd() const {
  if (points.empty()) throw ContractViolation("empty SSRD curve");
  return std::min_element(points.begin(), points.end(),
                          [](const SsrdPoint& a, const SsrdPoint& b) { return a.ssrd < b.ssrd; })
      ->ssrd;
}

std::int64_t SsrdCurve::at(double lambda) const {
  for (const auto& p : points) {
    if (p.lambda == lambda) return p.ssrd;
  }
  throw ContractViolation("lambda " + std::to_string(lambda) + " is not a grid point of this curve");
}

std::string CalibrationModel::fingerprint() const {
  Sha256 h;
  h.field(std::string_view("qsuggest-model/v1"));
  h.field(optimal_lambda);
  h.field(step_size);
  h.field(index_fingerprint);
  h.field(std::uint64_t{per_set.size()});
  for (const auto& s : per_set) {
    h.field(s.probe_query);
    h.field(s.ranked_file);
    h.field(std::uint64_t{s.set_size});
    h.field(s.best_lambda);
    h.field(std::uint64_t{s.curve.points.size()});
    for (const auto& p : s.curve.points) {
      h.field(p.lambda);
      h.field(static_cast<std::uint64_t>(p.ssrd));
    }
  }
  return h.hex_digest();
}

bool CalibrationModel::same_values(const CalibrationModel& other) const {
  return optimal_lambda == other.optimal_lambda && step_size == other.step_size &&
         index_fingerprint == other.index_fingerprint && per_set == other.per_set;
}

RankMap predict_ranks(const RankedSet& set, const SearchContext& context, Lambda lambda) {
  const auto ids = set.ids();
  const auto result = rank_candidates(context.encode(set.probe_query), ids, context.index(), lambda);
  RankMap predicted;
  for (const auto& c : result.candidates) predicted.emplace(c.question_id, static_cast<std::int64_t>(c.rank));
  return predicted;
}

std::int64_t evaluate_lambda(const RankedSet& set, const SearchContext& context, Lambda lambda) {
  return ssrd(predict_ranks(set, context, lambda), set.assigned());
}

BestLambda find_best_lambda(const RankedSet& set, const SearchContext& context, double step_size) {
  const auto grid = lambda_grid(step_size);
  const auto ids = set.ids();
  const auto query = context.encode(set.probe_query);
  const auto scores = score_candidates(query, ids, context.index());
  const auto assigned = set.assigned();

  BestLambda best;
  best.curve.points.reserve(grid.size());
  std::int64_t best_ssrd = -1;
  for (const double l : grid) {
    const auto result = rank_scored(query.text, scores, Lambda(l));
    RankMap predicted;
    for (const auto& c : result.candidates) predicted.emplace(c.question_id, static_cast<std::int64_t>(c.rank));
    const auto value = ssrd(predicted, assigned);
    best.curve.points.push_back({l, value});
    if (best_ssrd < 0 || value < best_ssrd) {
      best_ssrd = value;
      best.lambda = l;
    }
  }
  return best;
}

CalibrationModel calibrate(std::span<const RankedSet> sets, const SearchContext& context,
                           double step_size) {
  if (sets.empty()) throw InputError("calibration needs at least one ranked set");
  for (const auto& set : sets) {
    const auto problems = validate_ranked_set(set, context.index());
    if (!problems.empty()) throw ReportError("calibration aborted: invalid ranked set", problems);
  }
  CalibrationModel model;
  model.step_size = step_size;
  model.index_fingerprint = context.index().fingerprint();
  double sum = 0.0;
  for (const auto& set : sets) {
    auto best = find_best_lambda(set, context, step_size);
    sum += best.lambda;
    model.per_set.push_back(
        SetCalibration{set.probe_query, set.source, set.assignments.size(), best.lambda, std::move(best.curve)});
  }
  model.optimal_lambda = std::clamp(sum / static_cast<double>(sets.size()), 0.0, 1.0);
  model.created_at = utc_timestamp_now();
  return model;
}

CalibrationModel calibrate(const DriverManifest& manifest, const SearchContext& context,
                           double step_size) {
  lambda_grid(step_size);  // reject a bad step before touching any files
  const auto sets = load_ranked_sets(manifest, context.index());
  return calibrate(sets, context, step_size);
}

std::string utc_timestamp_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace qsuggest
