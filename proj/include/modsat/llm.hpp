#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace modsat {

inline constexpr double kCoderTemperature = 0.8;
inline constexpr double kEvaluatorTemperature = 0.0;

struct ChatRequest {
  std::string system;
  std::string user;
  double temperature = kCoderTemperature;
  int max_tokens = 2048;
  std::string model;

  // Stable hash of (system, user, temperature, model) as 16 hex digits.
  std::string digest() const;
};

class LlmError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class LlmClient {
public:
  virtual ~LlmClient() = default;
  // Throws LlmError on transport failure, exhausted or mismatched transcripts.
  virtual std::string complete(const ChatRequest& req) = 0;
  // Model id used for requests that leave ChatRequest::model empty.
  virtual std::string model() const { return ""; }
};

// Scripted backend: the response is any function of the request.
class MockLlm final : public LlmClient {
public:
  using Script = std::function<std::string(const ChatRequest&)>;
  explicit MockLlm(Script script, std::string model = "mock");
  // Replies with the given texts in order, then fails.
  static std::unique_ptr<MockLlm> sequence(std::vector<std::string> replies);

  std::string complete(const ChatRequest& req) override;
  std::string model() const override { return model_; }
  std::size_t calls() const { return calls_; }

private:
  Script script_;
  std::string model_;
  std::mutex mu_;
  std::size_t calls_ = 0;
};

struct TranscriptEntry {
  std::string digest;
  std::string response;
  // Request copy kept for readability; replay matches on the digest only.
  std::string system, user, model;
  double temperature = 0.0;

  nlohmann::json to_json() const;
  static TranscriptEntry from_json(const nlohmann::json& j);
};

struct Transcript {
  std::vector<TranscriptEntry> entries;

  void record(const ChatRequest& req, const std::string& response);
  std::string to_jsonl() const;
  static Transcript from_jsonl(const std::string& text);
  static Transcript load(const std::string& path);
  void save(const std::string& path) const;
};

// Consumes transcript entries in order; a request whose digest differs from
// the next entry is an error. An empty request model takes the entry's model.
class ReplayLlm final : public LlmClient {
public:
  explicit ReplayLlm(Transcript t, std::string model = "replay");
  std::string complete(const ChatRequest& req) override;
  std::string model() const override { return model_; }
  std::size_t remaining() const;

private:
  Transcript t_;
  std::string model_;
  mutable std::mutex mu_;
  std::size_t pos_ = 0;
};

// Forwards to another backend and appends every exchange to a transcript,
// optionally streaming it to a JSONL file as it grows. An empty request model
// is recorded as the backend's model.
class RecordingLlm final : public LlmClient {
public:
  explicit RecordingLlm(LlmClient& inner, std::string path = {});
  std::string complete(const ChatRequest& req) override;
  std::string model() const override { return inner_.model(); }
  Transcript transcript() const;

private:
  LlmClient& inner_;
  std::string path_;
  mutable std::mutex mu_;
  Transcript t_;
};

// Chat-completion endpoint over HTTP(S). Three attempts with exponential backoff.
class HttpLlm final : public LlmClient {
public:
  HttpLlm(std::string url, std::string model, std::string key, double timeout_s = 120.0);
  // Reads MODSAT_LLM_URL, MODSAT_LLM_MODEL, MODSAT_LLM_KEY.
  static std::unique_ptr<HttpLlm> from_env();
  std::string complete(const ChatRequest& req) override;
  std::string model() const override { return model_; }

private:
  std::string url_, model_, key_;
  double timeout_s_;
};

// mode: "live" | "replay" | "record". replay reads `transcript`; record wraps
// the live client and writes `transcript`.
struct LlmHandle {
  std::unique_ptr<LlmClient> backing;
  std::unique_ptr<LlmClient> client;
  LlmClient& get() const { return client ? *client : *backing; }
};
LlmHandle make_llm(const std::string& mode, const std::string& transcript);

} // namespace modsat
