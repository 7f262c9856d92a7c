#include "modsat/llm.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "modsat/hash.hpp"

namespace modsat {

using nlohmann::json;

std::string ChatRequest::digest() const {
  char temp[32];
  std::snprintf(temp, sizeof temp, "%.17g", temperature);
  // Length-prefixed fields so no separator can be forged by the content.
  std::uint64_t h = kFnvOffset;
  for (std::string_view f : {std::string_view(system), std::string_view(user), std::string_view(temp),
                             std::string_view(model)}) {
    h = fnv1a64(std::to_string(f.size()) + ":", h);
    h = fnv1a64(f, h);
  }
  return hex64(h);
}

MockLlm::MockLlm(Script script, std::string model) : script_(std::move(script)), model_(std::move(model)) {}

std::unique_ptr<MockLlm> MockLlm::sequence(std::vector<std::string> replies) {
  auto next = std::make_shared<std::size_t>(0);
  auto texts = std::make_shared<std::vector<std::string>>(std::move(replies));
  return std::make_unique<MockLlm>([next, texts](const ChatRequest&) {
    if (*next >= texts->size()) throw LlmError("mock script exhausted");
    return (*texts)[(*next)++];
  });
}

std::string MockLlm::complete(const ChatRequest& req) {
  std::lock_guard lock(mu_);
  ++calls_;
  return script_(req);
}

json TranscriptEntry::to_json() const {
  return {{"digest", digest}, {"model", model},   {"temperature", temperature},
          {"system", system}, {"user", user},     {"response", response}};
}

TranscriptEntry TranscriptEntry::from_json(const json& j) {
  TranscriptEntry e;
  e.digest = j.at("digest").get<std::string>();
  e.response = j.at("response").get<std::string>();
  e.model = j.value("model", std::string{});
  e.temperature = j.value("temperature", 0.0);
  e.system = j.value("system", std::string{});
  e.user = j.value("user", std::string{});
  return e;
}

void Transcript::record(const ChatRequest& req, const std::string& response) {
  entries.push_back({req.digest(), response, req.system, req.user, req.model, req.temperature});
}

std::string Transcript::to_jsonl() const {
  std::string out;
  for (const TranscriptEntry& e : entries) out += e.to_json().dump() + "\n";
  return out;
}

Transcript Transcript::from_jsonl(const std::string& text) {
  Transcript t;
  std::istringstream in(text);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      t.entries.push_back(TranscriptEntry::from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw LlmError("transcript line " + std::to_string(n) + ": " + e.what());
    }
  }
  return t;
}

Transcript Transcript::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LlmError("cannot open transcript " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_jsonl(ss.str());
}

void Transcript::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw LlmError("cannot write transcript " + path);
  out << to_jsonl();
}

ReplayLlm::ReplayLlm(Transcript t, std::string model) : t_(std::move(t)), model_(std::move(model)) {}

std::string ReplayLlm::complete(const ChatRequest& req) {
  std::lock_guard lock(mu_);
  if (pos_ >= t_.entries.size())
    throw LlmError("transcript exhausted after " + std::to_string(t_.entries.size()) + " entries");
  const TranscriptEntry& e = t_.entries[pos_];
  ChatRequest stamped = req;
  if (stamped.model.empty()) stamped.model = e.model;
  const std::string got = stamped.digest();
  if (got != e.digest)
    throw LlmError("transcript entry " + std::to_string(pos_ + 1) + ": expected digest " + e.digest +
                   ", request digest " + got);
  ++pos_;
  return e.response;
}

std::size_t ReplayLlm::remaining() const {
  std::lock_guard lock(mu_);
  return t_.entries.size() - pos_;
}

RecordingLlm::RecordingLlm(LlmClient& inner, std::string path) : inner_(inner), path_(std::move(path)) {
  if (!path_.empty()) {
    std::ofstream out(path_, std::ios::binary | std::ios::trunc);
    if (!out) throw LlmError("cannot write transcript " + path_);
  }
}

std::string RecordingLlm::complete(const ChatRequest& req) {
  // Held across the call so entries land in request order.
  std::lock_guard lock(mu_);
  ChatRequest stamped = req;
  if (stamped.model.empty()) stamped.model = inner_.model();
  std::string resp = inner_.complete(stamped);
  t_.record(stamped, resp);
  if (!path_.empty()) {
    std::ofstream out(path_, std::ios::binary | std::ios::app);
    out << t_.entries.back().to_json().dump() << "\n";
    if (!out) throw LlmError("cannot append to transcript " + path_);
  }
  return resp;
}

Transcript RecordingLlm::transcript() const {
  std::lock_guard lock(mu_);
  return t_;
}

LlmHandle make_llm(const std::string& mode, const std::string& transcript) {
  LlmHandle h;
  if (mode == "replay") {
    if (transcript.empty()) throw LlmError("replay mode needs a transcript path");
    h.backing = std::make_unique<ReplayLlm>(Transcript::load(transcript));
    return h;
  }
  if (mode != "live" && mode != "record") throw LlmError("unknown llm mode '" + mode + "'");
  h.backing = HttpLlm::from_env();
  if (!h.backing) throw LlmError("live llm mode needs MODSAT_LLM_URL");
  if (mode == "record") {
    if (transcript.empty()) throw LlmError("record mode needs a transcript path");
    h.client = std::make_unique<RecordingLlm>(*h.backing, transcript);
  }
  return h;
}

} // namespace modsat
