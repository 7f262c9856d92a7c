#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include <chrono>
#include <cstdlib>
#include <thread>

#include "json.hpp"
#include "modsat/diversity.hpp"
#include "modsat/llm.hpp"

namespace modsat {

using nlohmann::json;

namespace {

std::string env_or(const char* name, std::string fallback = {}) {
  const char* v = std::getenv(name);
  return v && *v ? std::string(v) : fallback;
}

struct Endpoint {
  std::string origin; // scheme://host[:port]
  std::string path;
};

Endpoint split_url(const std::string& url) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos) throw std::invalid_argument("url needs a scheme: " + url);
  const auto slash = url.find('/', scheme + 3);
  if (slash == std::string::npos) return {url, "/"};
  return {url.substr(0, slash), url.substr(slash)};
}

httplib::Result post_json(const std::string& url, const std::string& key, const json& body, double timeout_s) {
  const Endpoint ep = split_url(url);
  httplib::Client cli(ep.origin);
  const auto secs = static_cast<time_t>(timeout_s);
  const auto usecs = static_cast<time_t>((timeout_s - static_cast<double>(secs)) * 1e6);
  cli.set_connection_timeout(secs, usecs);
  cli.set_read_timeout(secs, usecs);
  cli.set_write_timeout(secs, usecs);
  httplib::Headers headers;
  if (!key.empty()) headers.emplace("Authorization", "Bearer " + key);
  return cli.Post(ep.path, headers, body.dump(), "application/json");
}

} // namespace

// --- chat completions ---

HttpLlm::HttpLlm(std::string url, std::string model, std::string key, double timeout_s)
    : url_(std::move(url)), model_(std::move(model)), key_(std::move(key)), timeout_s_(timeout_s) {}

std::unique_ptr<HttpLlm> HttpLlm::from_env() {
  const std::string url = env_or("MODSAT_LLM_URL");
  if (url.empty()) return nullptr;
  return std::make_unique<HttpLlm>(url, env_or("MODSAT_LLM_MODEL", "deepseek-chat"), env_or("MODSAT_LLM_KEY"));
}

std::string HttpLlm::complete(const ChatRequest& req) {
  const json body = {{"model", req.model.empty() ? model_ : req.model},
                     {"temperature", req.temperature},
                     {"max_tokens", req.max_tokens},
                     {"messages",
                      {{{"role", "system"}, {"content", req.system}}, {{"role", "user"}, {"content", req.user}}}}};
  std::string last_error;
  constexpr int kAttempts = 3;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(std::chrono::milliseconds(500 << (attempt - 1)));
    auto res = post_json(url_, key_, body, timeout_s_);
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status != 200) {
      last_error = "HTTP " + std::to_string(res->status);
      if (res->status >= 400 && res->status < 500 && res->status != 429) break; // not retryable
      continue;
    }
    try {
      return json::parse(res->body).at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception& e) {
      throw LlmError(std::string("malformed completion response: ") + e.what());
    }
  }
  throw LlmError("llm request failed: " + last_error);
}

// --- embeddings ---

HttpEmbedder::HttpEmbedder(std::string url, std::string model, std::string key)
    : url_(std::move(url)), model_(std::move(model)), key_(std::move(key)) {}

std::unique_ptr<HttpEmbedder> HttpEmbedder::from_env() {
  const std::string url = env_or("MODSAT_EMBED_URL");
  if (url.empty()) return nullptr;
  return std::make_unique<HttpEmbedder>(url, env_or("MODSAT_EMBED_MODEL", "codet5p-110m-embedding"),
                                        env_or("MODSAT_EMBED_KEY"));
}

Embedding HttpEmbedder::embed(std::string_view source) const {
  const json body = {{"model", model_}, {"input", std::string(source)}};
  auto res = post_json(url_, key_, body, 60.0);
  if (!res) throw std::runtime_error("embedding provider unavailable: " + httplib::to_string(res.error()));
  if (res->status != 200) throw std::runtime_error("embedding provider returned HTTP " + std::to_string(res->status));
  const json j = json::parse(res->body);
  const json& e = j.contains("embedding") ? j.at("embedding") : j.at("data").at(0).at("embedding");
  return e.get<Embedding>();
}

} // namespace modsat
