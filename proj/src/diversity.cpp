#include "modsat/diversity.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "modsat/hash.hpp"
#include "modsat/rng.hpp"

namespace modsat {

namespace {

std::string strip_comments(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (c == '"' || c == '\'') {
      const char q = c;
      out += s[i++];
      while (i < s.size() && s[i] != q && s[i] != '\n') {
        if (s[i] == '\\' && i + 1 < s.size()) out += s[i++];
        out += s[i++];
      }
      if (i < s.size() && s[i] == q) out += s[i++];
    } else if (c == '/' && i + 1 < s.size() && s[i + 1] == '/') {
      while (i < s.size() && s[i] != '\n') ++i;
    } else if (c == '/' && i + 1 < s.size() && s[i + 1] == '*') {
      const std::size_t end = s.find("*/", i + 2);
      const std::size_t stop = end == std::string_view::npos ? s.size() : end + 2;
      // Keep line structure so a block comment between tokens still separates them.
      bool newline = false;
      for (std::size_t k = i; k < stop; ++k) newline |= s[k] == '\n';
      out += newline ? '\n' : ' ';
      i = stop;
    } else {
      out += s[i++];
    }
  }
  return out;
}

int brace_delta(std::string_view line) {
  int d = 0;
  for (char c : line) d += c == '{' ? 1 : c == '}' ? -1 : 0;
  return d;
}

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

} // namespace

std::string normalize_code(std::string_view source) {
  const std::string plain = strip_comments(source);
  std::vector<std::string> lines;
  std::istringstream in(plain);
  std::string line;
  int depth = 0;
  bool prev_blank = true; // drops leading blank lines
  while (std::getline(in, line)) {
    const auto b = line.find_first_not_of(" \t\r\f\v");
    if (b == std::string::npos) {
      if (!prev_blank) lines.emplace_back();
      prev_blank = true;
      continue;
    }
    const auto e = line.find_last_not_of(" \t\r\f\v");
    const std::string body = line.substr(b, e - b + 1);
    const int level = std::max(0, body.front() == '}' ? depth - 1 : depth);
    lines.push_back(std::string(2 * static_cast<std::size_t>(level), ' ') + body);
    depth = std::max(0, depth + brace_delta(body));
    prev_blank = false;
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i) out += '\n';
    out += lines[i];
  }
  return out;
}

std::vector<std::string> code_tokens(std::string_view s) {
  static constexpr std::string_view kTwoChar[] = {"<=", ">=", "==", "!=", "&&", "||", "++", "--",
                                                  "+=", "-=", "*=", "/=", "::", "->", "<<", ">>"};
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (is_ident_start(c)) {
      const std::size_t b = i;
      while (i < s.size() && is_ident(s[i])) ++i;
      out.emplace_back(s.substr(b, i - b));
    } else if (std::isdigit(static_cast<unsigned char>(c)) ||
               (c == '.' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
      const std::size_t b = i;
      while (i < s.size() && (is_ident(s[i]) || s[i] == '.' ||
                              ((s[i] == '+' || s[i] == '-') && (s[i - 1] == 'e' || s[i - 1] == 'E'))))
        ++i;
      out.emplace_back(s.substr(b, i - b));
    } else {
      std::size_t len = 1;
      if (i + 1 < s.size())
        for (std::string_view op : kTwoChar)
          if (s.substr(i, 2) == op) len = 2;
      out.emplace_back(s.substr(i, len));
      i += len;
    }
  }
  return out;
}

HashedBigramEmbedder::HashedBigramEmbedder(int dim) : dim_(dim) {
  if (dim < 1) throw std::invalid_argument("embedding dimension must be positive");
}

Embedding HashedBigramEmbedder::embed(std::string_view source) const {
  std::vector<std::string> toks = code_tokens(normalize_code(source));
  toks.insert(toks.begin(), "<s>");
  toks.emplace_back("</s>");
  Embedding v(static_cast<std::size_t>(dim_), 0.0);
  for (std::size_t i = 0; i + 1 < toks.size(); ++i) {
    const std::uint64_t h = fnv1a64(toks[i + 1], fnv1a64("\x1f", fnv1a64(toks[i])));
    v[h % static_cast<std::uint64_t>(dim_)] += 1.0;
  }
  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;
  return v;
}

std::unique_ptr<Embedder> default_embedder() {
  if (auto http = HttpEmbedder::from_env()) return http;
  return std::make_unique<HashedBigramEmbedder>();
}

double cosine_similarity(const Embedding& a, const Embedding& b) {
  if (a.size() != b.size()) throw std::invalid_argument("cosine_similarity: dimension mismatch");
  double ab = 0, aa = 0, bb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  if (aa == 0 || bb == 0) return 0.0;
  return ab / std::sqrt(aa * bb);
}

// --- clustering ---

namespace {

double dist2(const Embedding& a, const Embedding& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

int nearest(const Embedding& p, const std::vector<Embedding>& cs) {
  int best = 0;
  double bd = dist2(p, cs[0]);
  for (std::size_t j = 1; j < cs.size(); ++j) {
    const double d = dist2(p, cs[j]);
    if (d < bd) {
      bd = d;
      best = static_cast<int>(j);
    }
  }
  return best;
}

} // namespace

std::vector<std::size_t> ClusterModel::occupancy() const {
  std::vector<std::size_t> c(centroids.size(), 0);
  for (int a : assignment) ++c[static_cast<std::size_t>(a)];
  return c;
}

double within_sse(std::span<const Embedding> points, const ClusterModel& m) {
  double s = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i)
    s += dist2(points[i], m.centroids[static_cast<std::size_t>(m.assignment[i])]);
  return s;
}

ClusterModel kmeans_pp(std::span<const Embedding> points, int k, std::uint64_t seed, int max_iter) {
  const std::size_t n = points.size();
  if (n == 0) throw std::invalid_argument("kmeans_pp: empty input");
  if (k < 1 || static_cast<std::size_t>(k) > n) throw std::invalid_argument("kmeans_pp: need 1 <= K <= N");
  const std::size_t dim = points[0].size();
  for (const Embedding& p : points) {
    if (p.size() != dim) throw std::invalid_argument("kmeans_pp: mixed dimensions");
    for (double x : p)
      if (!std::isfinite(x)) throw std::invalid_argument("kmeans_pp: non-finite component");
  }

  Rng rng(seed);
  ClusterModel m;
  m.centroids.push_back(points[rng.below(n)]);
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = dist2(points[i], m.centroids[0]);
  while (m.k() < k) {
    double total = 0.0;
    for (double x : d2) total += x;
    std::size_t pick = n - 1;
    if (total > 0.0) {
      const double r = rng.uniform01() * total;
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        acc += d2[i];
        if (d2[i] > 0.0 && r < acc) {
          pick = i;
          break;
        }
      }
      while (d2[pick] == 0.0) --pick; // rounding fallback: last point with positive weight
    } else {
      pick = rng.below(n); // every point coincides with a centroid
    }
    m.centroids.push_back(points[pick]);
    for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], dist2(points[i], m.centroids.back()));
  }

  m.assignment.assign(n, -1);
  for (std::size_t i = 0; i < n; ++i) m.assignment[i] = nearest(points[i], m.centroids);
  m.sse_trace.push_back(within_sse(points, m));

  for (int it = 0; it < max_iter; ++it) {
    // Update: centroid = mean of its members.
    std::vector<Embedding> sums(static_cast<std::size_t>(k), Embedding(dim, 0.0));
    std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto a = static_cast<std::size_t>(m.assignment[i]);
      ++counts[a];
      for (std::size_t d = 0; d < dim; ++d) sums[a][d] += points[i][d];
    }
    for (std::size_t j = 0; j < static_cast<std::size_t>(k); ++j)
      if (counts[j] > 0)
        for (std::size_t d = 0; d < dim; ++d) m.centroids[j][d] = sums[j][d] / static_cast<double>(counts[j]);

    // Assign: nearest centroid, ties to the lower index.
    std::vector<int> next(n);
    for (std::size_t i = 0; i < n; ++i) next[i] = nearest(points[i], m.centroids);

    // Empty clusters move to the point farthest from its centroid, taken
    // only from clusters that would stay nonempty.
    std::vector<std::size_t> occ(static_cast<std::size_t>(k), 0);
    for (int a : next) ++occ[static_cast<std::size_t>(a)];
    for (std::size_t j = 0; j < static_cast<std::size_t>(k); ++j) {
      if (occ[j] > 0) continue;
      std::size_t far = n;
      double fd = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const auto a = static_cast<std::size_t>(next[i]);
        if (occ[a] < 2) continue;
        const double d = dist2(points[i], m.centroids[a]);
        if (d > fd) {
          fd = d;
          far = i;
        }
      }
      if (far == n) continue; // remaining points all coincide with their centroids
      --occ[static_cast<std::size_t>(next[far])];
      m.centroids[j] = points[far];
      next[far] = static_cast<int>(j);
      occ[j] = 1;
    }

    const bool changed = next != m.assignment;
    m.assignment = std::move(next);
    m.iterations = it + 1;
    m.sse_trace.push_back(within_sse(points, m));
    if (!changed) break;
  }
  return m;
}

double entropy_of_counts(std::span<const std::size_t> counts) {
  std::size_t n = 0;
  for (std::size_t c : counts) n += c;
  if (n == 0) throw std::invalid_argument("entropy: no points");
  double h = 0.0;
  for (std::size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(n);
    h -= p * std::log(p);
  }
  return h;
}

double entropy(const ClusterModel& m) {
  const auto occ = m.occupancy();
  return entropy_of_counts(occ);
}

int default_k(std::size_t n) {
  const int k = std::max(2, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n)))));
  return std::min<int>(k, static_cast<int>(n));
}

double code_diversity(std::span<const std::string> sources, const Embedder& embedder, std::uint64_t seed,
                      std::optional<int> k) {
  if (sources.empty()) return 0.0;
  std::vector<Embedding> pts;
  pts.reserve(sources.size());
  for (const std::string& s : sources) pts.push_back(embedder.embed(normalize_code(s)));
  const int kk = std::min<int>(k.value_or(default_k(pts.size())), static_cast<int>(pts.size()));
  return entropy(kmeans_pp(pts, kk, seed));
}

} // namespace modsat
