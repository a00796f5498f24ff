#include "qsuggest/service.hpp"

#include <httplib.h>
#include <json.hpp>

#include "qsuggest/errors.hpp"

namespace qsuggest {
namespace {

using nlohmann::json;

HttpReply error_reply(int status, std::string_view code, std::string_view message) {
  json body = {{"error", {{"code", code}, {"message", message}}}};
  return {status, body.dump()};
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n\f\v");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n\f\v");
  return s.substr(first, last - first + 1);
}

json suggestion_json(const ScoredCandidate& c, const QuestionIndex& index) {
  return {
      {"rank", c.rank},
      {"question_id", c.question_id},
      {"question_text", index.at(c.question_id).text},
      {"s1", c.s1},
      {"s2", c.s2},
      {"combined", c.combined},
  };
}

}  // namespace

SuggestionService::SuggestionService(std::size_t default_top_k) : default_top_k_(default_top_k) {
  if (default_top_k == 0) throw InputError("--default-top-k must be at least 1");
}

void SuggestionService::install(std::shared_ptr<const Session> session) {
  std::lock_guard lock(mutex_);
  session_ = std::move(session);
}

std::shared_ptr<const Session> SuggestionService::current() const {
  std::lock_guard lock(mutex_);
  return session_;
}

HttpReply SuggestionService::handle_suggest(std::string_view body) const {
  const auto session = current();
  if (!session) return error_reply(503, "not_ready", "index is still loading");

  json request;
  try {
    request = json::parse(body);
  } catch (const json::parse_error&) {
    return error_reply(400, "malformed_json", "request body is not valid JSON");
  }
  if (!request.is_object()) return error_reply(400, "invalid_request", "request body must be a JSON object");

  const auto query = request.find("query");
  if (query == request.end() || !query->is_string()) {
    return error_reply(400, "invalid_query", "\"query\" must be a string");
  }
  const auto text = query->get<std::string>();
  if (trim(text).empty()) return error_reply(400, "empty_query", "\"query\" is empty");

  const auto top_k = request.find("top_k");
  const auto threshold = request.find("threshold");
  const bool has_k = top_k != request.end() && !top_k->is_null();
  const bool has_t = threshold != request.end() && !threshold->is_null();
  if (has_k && has_t) {
    return error_reply(400, "conflicting_cutoffs", "supply at most one of \"top_k\" and \"threshold\"");
  }
  Cutoff cutoff = Cutoff::top_k(default_top_k_);
  if (has_k) {
    if (!top_k->is_number_integer() || top_k->get<std::int64_t>() < 1) {
      return error_reply(400, "invalid_top_k", "\"top_k\" must be a positive integer");
    }
    cutoff = Cutoff::top_k(top_k->get<std::size_t>());
  } else if (has_t) {
    const double t = threshold->is_number() ? threshold->get<double>() : -1.0;
    if (!(t >= 0.0 && t <= 1.0)) return error_reply(400, "invalid_threshold", "\"threshold\" must be a number in [0, 1]");
    cutoff = Cutoff::at_least(t);
  }

  try {
    const auto encoded = session->context->encode(text);
    const auto result = suggest(*session, text, cutoff);
    json suggestions = json::array();
    for (const auto& c : result.candidates) suggestions.push_back(suggestion_json(c, session->index()));
    json response = {
        {"query", text},
        {"lambda_used", result.lambda_used.value()},
        {"cutoff", result.cutoff.describe()},
        {"degenerate_query", encoded.degenerate()},
        {"suggestions", std::move(suggestions)},
    };
    return {200, response.dump()};
  } catch (const std::exception& e) {
    return error_reply(500, "internal", e.what());
  }
}

HttpReply SuggestionService::handle_health() const {
  const auto session = current();
  if (!session) return {503, json{{"status", "loading"}}.dump()};
  json doc = {
      {"status", "ok"},
      {"index_fingerprint", session->index().fingerprint()},
      {"model_fingerprint", session->model ? json(session->model->fingerprint()) : json(nullptr)},
      {"lambda_used", session->lambda},
      {"question_count", session->index().size()},
      {"stale", session->stale_model},
      {"warnings", session->warnings},
  };
  return {200, doc.dump()};
}

struct HttpFrontend::Impl {
  httplib::Server server;
};

HttpFrontend::HttpFrontend(const SuggestionService& service) : impl_(std::make_unique<Impl>()) {
  auto send = [](httplib::Response& res, const HttpReply& reply) {
    res.status = reply.status;
    res.set_content(reply.body, "application/json; charset=utf-8");
  };
  impl_->server.Post("/v1/suggest", [&service, send](const httplib::Request& req, httplib::Response& res) {
    send(res, service.handle_suggest(req.body));
  });
  impl_->server.Get("/v1/health", [&service, send](const httplib::Request&, httplib::Response& res) {
    send(res, service.handle_health());
  });
}

HttpFrontend::~HttpFrontend() = default;

int HttpFrontend::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpFrontend::listen() { return impl_->server.listen_after_bind(); }

void HttpFrontend::stop() { impl_->server.stop(); }

void HttpFrontend::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace qsuggest
