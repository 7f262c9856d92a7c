#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace modsat {

using Embedding = std::vector<double>;

// Strips // and /* */ comments, re-indents by brace depth (two spaces per
// level), trims trailing whitespace and collapses runs of blank lines.
std::string normalize_code(std::string_view source);

// Identifiers, numbers, two-character operators and single punctuation.
std::vector<std::string> code_tokens(std::string_view source);

class Embedder {
public:
  virtual ~Embedder() = default;
  virtual Embedding embed(std::string_view source) const = 0;
  virtual std::string name() const = 0;
};

// Offline fallback: token-bigram counts hashed into m buckets, L2-normalized.
class HashedBigramEmbedder final : public Embedder {
public:
  explicit HashedBigramEmbedder(int dim = 256);
  Embedding embed(std::string_view source) const override;
  std::string name() const override { return "hashed-bigram/" + std::to_string(dim_); }
  int dim() const { return dim_; }

private:
  int dim_;
};

// POSTs {"input": text} to an endpoint and reads "embedding" (or the
// OpenAI-style data[0].embedding). Configured by MODSAT_EMBED_URL,
// MODSAT_EMBED_MODEL and MODSAT_EMBED_KEY.
class HttpEmbedder final : public Embedder {
public:
  HttpEmbedder(std::string url, std::string model, std::string key);
  static std::unique_ptr<HttpEmbedder> from_env(); // nullptr when MODSAT_EMBED_URL is unset
  Embedding embed(std::string_view source) const override;
  std::string name() const override { return "http:" + model_; }

private:
  std::string url_, model_, key_;
};

// Remote embedder when configured, hashed fallback otherwise.
std::unique_ptr<Embedder> default_embedder();

double cosine_similarity(const Embedding& a, const Embedding& b);

struct ClusterModel {
  std::vector<Embedding> centroids;
  std::vector<int> assignment;   // point -> centroid index
  std::vector<double> sse_trace; // within-cluster SSE after seeding and after each Lloyd iteration
  int iterations = 0;

  int k() const { return static_cast<int>(centroids.size()); }
  std::vector<std::size_t> occupancy() const;
};

double within_sse(std::span<const Embedding> points, const ClusterModel& m);

// k-means++ seeding followed by Lloyd iterations until the assignment is
// stable or max_iter rounds have run.
ClusterModel kmeans_pp(std::span<const Embedding> points, int k, std::uint64_t seed, int max_iter = 100);

// Natural-log Shannon entropy of cluster occupancy.
double entropy(const ClusterModel& m);
double entropy_of_counts(std::span<const std::size_t> counts);

// max(2, ceil(sqrt(n))) clamped to n.
int default_k(std::size_t n);

// normalize -> embed -> cluster -> entropy. Returns 0 for no sources.
double code_diversity(std::span<const std::string> sources, const Embedder& embedder, std::uint64_t seed,
                      std::optional<int> k = {});

} // namespace modsat
