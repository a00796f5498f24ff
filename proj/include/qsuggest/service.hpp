#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>

#include "qsuggest/session.hpp"

namespace qsuggest {

struct HttpReply {
  int status = 200;
  std::string body;  // JSON
};

// Request handling over an immutable Session. The session pointer is swapped
// under a short lock; a request keeps whichever session it started with.
class SuggestionService {
 public:
  explicit SuggestionService(std::size_t default_top_k = 10);

  void install(std::shared_ptr<const Session> session);
  std::shared_ptr<const Session> current() const;
  std::size_t default_top_k() const noexcept { return default_top_k_; }

  // Body: {"query": "...", "top_k": 5} or {"query": "...", "threshold": 0.4}.
  // Errors come back as {"error": {"code": ..., "message": ...}}.
  HttpReply handle_suggest(std::string_view body) const;
  HttpReply handle_health() const;

 private:
  std::size_t default_top_k_;
  mutable std::mutex mutex_;
  std::shared_ptr<const Session> session_;
};

// Thin HTTP front end: POST /v1/suggest, GET /v1/health.
class HttpFrontend {
 public:
  explicit HttpFrontend(const SuggestionService& service);
  ~HttpFrontend();

  // Port 0 picks a free port. Returns the bound port, or -1.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  bool listen();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace qsuggest
