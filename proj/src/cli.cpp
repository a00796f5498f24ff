#include "qsuggest/cli.hpp"

#include <csignal>
#include <cstdio>
#include <iostream>
#include <optional>
#include <pthread.h>
#include <thread>

#include <CLI11.hpp>

#include "qsuggest/calibration.hpp"
#include "qsuggest/csv.hpp"
#include "qsuggest/errors.hpp"
#include "qsuggest/evalreport.hpp"
#include "qsuggest/service.hpp"
#include "qsuggest/session.hpp"
#include "qsuggest/store.hpp"

namespace qsuggest::cli {
namespace {

namespace fs = std::filesystem;

struct Globals {
  std::string index_path = "qsuggest-index.json";
  std::string model_path = "qsuggest-model.json";
  std::string stopwords_path;
  std::string word_vectors_path;
  std::string embedder;  // empty: wordvec if --word-vectors is given, else hash
  std::size_t hash_dim = 64;
  std::uint64_t hash_seed = 42;
  double step_size = 0.1;
  std::optional<std::size_t> top_k;
  std::optional<double> threshold;
  std::optional<double> lambda;
  std::string format = "text";
};

std::string fixed(double x, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
  return buf;
}

std::string grid_text(double x) {
  auto s = csv::number(x);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

class Runner {
 public:
  Runner(Globals g, std::ostream& out, std::ostream& err) : g_(std::move(g)), out_(out), err_(err) {}

  void warn(const std::string& message) { err_ << "warning: " << message << "\n"; }

  PreprocessConfig active_config() const {
    auto config = PreprocessConfig::defaults();
    if (!g_.stopwords_path.empty()) config.stopwords = load_stopwords(g_.stopwords_path);
    return config;
  }

  std::optional<fs::path> word_vectors() const {
    if (g_.word_vectors_path.empty()) return std::nullopt;
    return fs::path(g_.word_vectors_path);
  }

  Cutoff cutoff(std::size_t default_k) const {
    if (g_.top_k && g_.threshold) throw InputError("--top-k and --threshold are mutually exclusive");
    if (g_.top_k) {
      if (*g_.top_k == 0) throw InputError("--top-k must be at least 1");
      return Cutoff::top_k(*g_.top_k);
    }
    if (g_.threshold) {
      if (!(*g_.threshold >= 0.0 && *g_.threshold <= 1.0)) throw InputError("--threshold must lie in [0, 1]");
      return Cutoff::at_least(*g_.threshold);
    }
    return Cutoff::top_k(default_k);
  }

  bool csv_output() const {
    if (g_.format != "text" && g_.format != "csv") throw InputError("--format must be text or csv");
    return g_.format == "csv";
  }

  SessionOptions session_options(bool with_model) const {
    SessionOptions o;
    o.index_path = g_.index_path;
    if (with_model) o.model_path = fs::path(g_.model_path);
    o.word_vectors_path = word_vectors();
    o.lambda_override = g_.lambda;
    if (!g_.stopwords_path.empty()) o.active_config = active_config();
    return o;
  }

  // Index plus provider, without a model.
  std::shared_ptr<const SearchContext> load_context() {
    auto index = std::make_shared<const QuestionIndex>(load_index(g_.index_path));
    if (!g_.stopwords_path.empty()) {
      for (const auto& w : config_warnings(*index, active_config())) warn(w);
    }
    auto provider = provider_for_index(*index, word_vectors());
    return std::make_shared<const SearchContext>(std::move(index), std::move(provider));
  }

  int ingest(const std::string& corpus, const std::string& format, bool include_body,
             std::optional<std::size_t> limit) {
    std::string embedder = g_.embedder.empty() ? (g_.word_vectors_path.empty() ? "hash" : "wordvec") : g_.embedder;
    std::shared_ptr<const EmbeddingProvider> provider;
    if (embedder == "wordvec") {
      if (g_.word_vectors_path.empty()) throw InputError("--embedder wordvec requires --word-vectors");
      // Loaded before the corpus is touched, so a bad table fails fast.
      auto table = std::make_shared<const WordVectorTable>(load_word_vectors(g_.word_vectors_path, limit));
      provider = std::make_shared<const WordVectorProvider>(std::move(table));
    } else if (embedder == "hash") {
      if (g_.hash_dim == 0) throw InputError("--hash-dim must be at least 1");
      provider = hash_embedder(g_.hash_dim, g_.hash_seed);
    } else {
      throw InputError("--embedder must be wordvec or hash");
    }

    IngestOptions options;
    options.format = format.empty() ? guess_corpus_format(corpus) : parse_corpus_format(format);
    options.include_body = include_body;
    const auto index = ingest_corpus(corpus, options, active_config(), *provider);
    save_index(index, g_.index_path);

    out_ << "questions        " << index.size() << "\n"
         << "vocabulary size  " << index.vocabulary_size() << "\n"
         << "degenerate       " << index.degenerate_count() << "\n"
         << "all-OOV          " << index.all_oov_count() << "\n"
         << "OOV tokens       " << index.oov_token_count() << "\n"
         << "embedder         " << index.provider_id() << "\n"
         << "fingerprint      " << index.fingerprint() << "\n"
         << "index written to " << g_.index_path << "\n";
    if (index.degenerate_count() > 0) {
      warn(std::to_string(index.degenerate_count()) + " question(s) have no terms left after preprocessing");
    }
    return kOk;
  }

  int calibrate(const std::string& manifest_path, const std::string& curves_dir_flag) {
    const auto grid = lambda_grid(g_.step_size);
    const auto manifest = load_manifest(manifest_path);
    const auto context = load_context();
    const auto model = qsuggest::calibrate(manifest, *context, g_.step_size);
    save_model(model, g_.model_path);

    fs::path curves_dir = curves_dir_flag;
    if (curves_dir.empty()) {
      const fs::path model_path(g_.model_path);
      curves_dir = model_path.parent_path() / (model_path.stem().string() + "-curves");
    }
    fs::create_directories(curves_dir);

    out_ << "grid:";
    for (double l : grid) out_ << " " << grid_text(l);
    out_ << "\n";
    for (std::size_t i = 0; i < model.per_set.size(); ++i) {
      const auto& s = model.per_set[i];
      const auto curve_path = curves_dir / ("set-" + std::to_string(i + 1) + ".csv");
      export_ssrd_curve(s.curve, curve_path);
      out_ << "set " << (i + 1) << "  best lambda " << grid_text(s.best_lambda) << "  min ssrd "
           << s.curve.min_ssrd() << "  (" << s.ranked_file << ", " << s.set_size << " questions)  curve "
           << curve_path.string() << "\n";
    }
    out_ << "optimal lambda " << csv::number(model.optimal_lambda) << "\n"
         << "model written to " << g_.model_path << "\n";
    return kOk;
  }

  int query(const std::string& text) {
    const bool as_csv = csv_output();
    const auto cut = cutoff(10);
    const auto session = open_session(session_options(true));
    for (const auto& w : session.warnings) warn(w);
    const auto result = suggest(session, text, cut);
    if (session.context->encode(text).analyzed.stems.empty()) {
      warn("query has no terms left after preprocessing; every score is 0");
    }

    if (as_csv) {
      out_ << "rank,id,s1,s2,combined\n";
      for (const auto& c : result.candidates) {
        out_ << csv::join({std::to_string(c.rank), c.question_id, csv::number(c.s1), csv::number(c.s2),
                           csv::number(c.combined)})
             << "\n";
      }
      return kOk;
    }
    out_ << "lambda " << csv::number(result.lambda_used.value()) << "  cutoff " << result.cutoff.describe() << "\n";
    std::size_t width = 2;
    for (const auto& c : result.candidates) width = std::max(width, c.question_id.size());
    auto pad = [](std::string s, std::size_t w) { return s.size() < w ? s + std::string(w - s.size(), ' ') : s; };
    out_ << pad("rank", 6) << pad("id", width + 2) << pad("s1", 10) << pad("s2", 10) << "combined\n";
    for (const auto& c : result.candidates) {
      out_ << pad(std::to_string(c.rank), 6) << pad(c.question_id, width + 2) << pad(fixed(c.s1, 6), 10)
           << pad(fixed(c.s2, 6), 10) << fixed(c.combined, 6) << "\n";
    }
    return kOk;
  }

  int eval(const std::string& manifest_path, const std::string& out_dir, std::string name) {
    const bool as_csv = csv_output();
    DriverManifest manifest;
    try {
      manifest = load_manifest(manifest_path);
    } catch (const ReportError&) {
      throw;
    } catch (const InputError& e) {
      throw InputError(std::string(e.what()) +
                       "\nhint: a manifest is a CSV with header \"probe_query,ranked_file\" and one row per set");
    }
    const auto context = load_context();
    if (!fs::exists(g_.model_path)) {
      throw InputError("no calibration model at " + g_.model_path + "; run calibrate first");
    }
    auto model = load_model(g_.model_path);
    if (g_.lambda) {
      if (!(*g_.lambda >= 0.0 && *g_.lambda <= 1.0)) throw InputError("--lambda must lie in [0, 1]");
      model.optimal_lambda = *g_.lambda;
    }
    if (name.empty()) name = fs::path(manifest_path).stem().string();
    const auto report = error_reduction_report(manifest, *context, model, name);
    for (const auto& w : report.warnings) warn(w);

    const auto table = format_report_table(report);
    const auto report_csv = format_report_csv(report);
    const auto sets_csv = format_set_csv(report);
    out_ << (as_csv ? report_csv : table);
    if (!out_dir.empty()) {
      fs::create_directories(out_dir);
      const fs::path dir(out_dir);
      write_text_file(dir / "report.txt", table);
      write_text_file(dir / "report.csv", report_csv);
      write_text_file(dir / "report_sets.csv", sets_csv);
      if (!as_csv) out_ << "report written to " << (dir / "report.txt").string() << ", report.csv, report_sets.csv\n";
    }
    return kOk;
  }

  int histogram(const std::string& probe, const std::string& method_name, const std::string& output) {
    const bool as_csv = csv_output();
    const auto context = load_context();
    double lambda = kFallbackLambda;
    if (g_.lambda) {
      lambda = *g_.lambda;
    } else if (method_name == "combined" && fs::exists(g_.model_path)) {
      lambda = load_model(g_.model_path).optimal_lambda;
    }
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw InputError("--lambda must lie in [0, 1]");
    const auto method = parse_score_method(method_name, lambda);
    const auto h = score_histogram(*context, probe, method);
    if (!output.empty()) export_histogram(h, output);

    if (as_csv) {
      out_ << format_histogram(h);
    } else {
      out_ << "method " << method.describe() << ", " << h.total << " questions\n";
      for (std::size_t i = 0; i < Histogram::kBins; ++i) {
        const bool last = i + 1 == Histogram::kBins;
        out_ << "[" << fixed(Histogram::edge(i), 1) << ", " << fixed(Histogram::edge(i + 1), 1) << (last ? "]" : ")")
             << "  " << h.counts[i] << "\n";
      }
    }
    return kOk;
  }

  int serve(const std::string& host, int port, std::size_t default_top_k) {
    // Signals are handled synchronously by this thread; block them before
    // any other thread starts so they inherit the mask.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGHUP);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    SuggestionService service(default_top_k);
    HttpFrontend http(service);
    const int bound = http.bind(host, port);
    if (bound < 0) throw InputError("cannot listen on " + host + ":" + std::to_string(port));
    std::thread listener([&http] { http.listen(); });

    const auto options = session_options(true);
    auto load = [&]() {
      auto session = std::make_shared<const Session>(open_session(options));
      for (const auto& w : session->warnings) warn(w);
      service.install(std::move(session));
    };
    try {
      load();
    } catch (...) {
      http.stop();
      listener.join();
      throw;
    }
    out_ << "listening on " << host << ":" << bound << " (lambda "
         << csv::number(service.current()->lambda) << ")" << std::endl;

    for (;;) {
      int sig = 0;
      if (sigwait(&signals, &sig) != 0) continue;
      if (sig != SIGHUP) break;
      try {
        load();
        out_ << "reloaded index and model" << std::endl;
      } catch (const std::exception& e) {
        err_ << "error: reload failed, keeping the previous index: " << e.what() << std::endl;
      }
    }
    http.stop();
    listener.join();
    return kOk;
  }

 private:
  Globals g_;
  std::ostream& out_;
  std::ostream& err_;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"qsuggest: similar-question suggestions from fused syntactic and semantic scores"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.option_defaults()->always_capture_default();
  app.add_option("--index", g.index_path, "Index file");
  app.add_option("--model", g.model_path, "Calibration model file");
  app.add_option("--stopwords", g.stopwords_path, "Stop-word list, one word per line")->check(CLI::ExistingFile);
  app.add_option("--word-vectors", g.word_vectors_path, "Word vectors in word2vec text format");
  app.add_option("--embedder", g.embedder, "wordvec or hash (default: wordvec when --word-vectors is given)")
      ->check(CLI::IsMember({"wordvec", "hash"}));
  app.add_option("--hash-dim", g.hash_dim, "Hash embedder dimension");
  app.add_option("--hash-seed", g.hash_seed, "Hash embedder seed");
  app.add_option("--step-size", g.step_size, "Lambda grid step");
  app.add_option("--top-k", g.top_k, "Keep the best K suggestions");
  app.add_option("--threshold", g.threshold, "Keep suggestions scoring at least T");
  app.add_option("--lambda", g.lambda, "Override the calibrated lambda");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"text", "csv"}));

  auto* ingest = app.add_subcommand("ingest", "Build an index from a corpus");
  std::string corpus, corpus_format;
  bool include_body = false;
  std::optional<std::size_t> vector_limit;
  ingest->add_option("corpus", corpus, "CSV or JSONL corpus")->required();
  ingest->add_option("--corpus-format", corpus_format, "csv or jsonl (default: by extension)")
      ->check(CLI::IsMember({"csv", "jsonl"}));
  ingest->add_flag("--include-body", include_body, "Score title and body together");
  ingest->add_option("--word-vector-limit", vector_limit, "Read at most N word vectors");

  auto* calibrate = app.add_subcommand("calibrate", "Learn lambda from admin-ranked sets");
  std::string manifest, curves_dir;
  calibrate->add_option("manifest", manifest, "Manifest CSV (probe_query,ranked_file)")->required();
  calibrate->add_option("--curves-dir", curves_dir, "Directory for per-set SSRD curves");

  auto* query = app.add_subcommand("query", "Rank indexed questions against a query");
  std::vector<std::string> words;
  query->add_option("text", words, "Query text")->required();

  auto* eval = app.add_subcommand("eval", "Error reduction of S1, S2 and S_lambda against a random baseline");
  std::string eval_manifest, out_dir, data_set;
  eval->add_option("manifest", eval_manifest, "Manifest CSV (probe_query,ranked_file)")->required();
  eval->add_option("--out-dir", out_dir, "Write report.txt, report.csv and report_sets.csv here");
  eval->add_option("--name", data_set, "Data set label (default: manifest file name)");

  auto* histogram = app.add_subcommand("histogram", "Score distribution of the index against a probe");
  std::vector<std::string> probe_words;
  std::string method = "syntactic", hist_out;
  histogram->add_option("probe", probe_words, "Probe text")->required();
  histogram->add_option("--method", method, "syntactic, semantic or combined")
      ->check(CLI::IsMember({"syntactic", "semantic", "combined"}));
  histogram->add_option("--output", hist_out, "Write the histogram CSV here");

  auto* serve = app.add_subcommand("serve", "HTTP suggestion service");
  int port = 8080;
  std::size_t default_top_k = 10;
  std::string host = "127.0.0.1";
  serve->add_option("--port", port, "Port (0 picks a free one)");
  serve->add_option("--host", host, "Address to bind");
  serve->add_option("--default-top-k", default_top_k, "Cutoff when a request names none");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  auto joined = [](const std::vector<std::string>& parts) {
    std::string s;
    for (const auto& p : parts) s += (s.empty() ? "" : " ") + p;
    return s;
  };

  Runner runner(g, out, err);
  try {
    if (*ingest) return runner.ingest(corpus, corpus_format, include_body, vector_limit);
    if (*calibrate) return runner.calibrate(manifest, curves_dir);
    if (*query) return runner.query(joined(words));
    if (*eval) return runner.eval(eval_manifest, out_dir, data_set);
    if (*histogram) return runner.histogram(joined(probe_words), method, hist_out);
    if (*serve) return runner.serve(host, port, default_top_k);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
  return kInputError;
}

}  // namespace qsuggest::cli
