#ifndef INTERPEVAL_BACKENDS_HPP_
#define INTERPEVAL_BACKENDS_HPP_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

namespace interpeval {

enum class BackendKind { http_embeddings, http_chat, mock_embeddings, mock_chat };

const char* to_string(BackendKind kind);
std::optional<BackendKind> parse_backend_kind(std::string_view s);

bool is_embeddings_kind(BackendKind kind);
bool is_chat_kind(BackendKind kind);

struct BackendConfig {
  std::string backend_id;
  BackendKind kind = BackendKind::mock_embeddings;
  std::string endpoint_url;                  // required for http kinds
  std::string model_name;
  std::optional<int> embedding_dim;          // required for mock_embeddings
  std::string api_key_env;                   // env var holding the bearer token
  int max_in_flight = 4;
  int max_retries = 3;
  std::chrono::milliseconds timeout{30000};
  std::optional<std::filesystem::path> cache_dir;
  std::uint64_t mock_seed = 0;
  // Backoff base for retry delays; attempt i sleeps uniform(0, base * 2^i).
  std::chrono::milliseconds retry_base{1000};
  int batch_size = 32;                       // texts per embeddings request
};

// Throws ConfigError when the config violates its kind's requirements.
void validate_backend_config(const BackendConfig& config);

struct EmbeddingVector {
  std::vector<double> values;

  std::size_t dim() const { return values.size(); }
};

// Deterministic unit-length pseudorandom embedding: the counter-based
// stream is seeded with hash64(seed, normalized text), so equal inputs give
// bit-identical vectors on every platform. dim must be >= 2.
EmbeddingVector mock_embedding(std::string_view text, int dim, std::uint64_t seed);

// Deterministic mock judge response. A prompt containing "SIM=d" with d in
// 1..5 echoes that digit; otherwise the digit is drawn from the prompt hash.
std::string mock_chat_response(std::string_view prompt, std::uint64_t seed);

// Cache key: hex SHA-256 over backend_id, model_name and the exact request
// text (embedding input or full chat prompt), separated by 0x1f.
std::string cache_digest(std::string_view backend_id, std::string_view model_name,
                         std::string_view text);

// Append-only JSONL response cache, one file per backend. Concurrent
// writers may append duplicate records; reads deduplicate by digest.
class ResponseCache {
 public:
  ResponseCache(std::filesystem::path file, std::string model_name);

  std::optional<nlohmann::json> lookup(const std::string& digest) const;
  void store(const std::string& digest, const nlohmann::json& result);

  std::size_t size() const;
  const std::filesystem::path& file() const { return file_; }

 private:
  std::filesystem::path file_;
  std::string model_name_;
  mutable std::mutex mutex_;
  std::unordered_map<std::string, nlohmann::json> entries_;
};

// Uniform scoring-engine handle. Thread-safe: operations may be invoked
// concurrently; at most max_in_flight HTTP requests are outstanding at any
// time; cache reads/writes are serialized.
class Backend {
 public:
  explicit Backend(BackendConfig config);
  ~Backend();

  Backend(const Backend&) = delete;
  Backend& operator=(const Backend&) = delete;

  const BackendConfig& config() const { return config_; }

  // Embeds texts in input order. Results are independent of batching and of
  // request completion order; cached texts are served without traffic.
  std::vector<EmbeddingVector> embed_texts(const std::vector<std::string>& texts);

  // Single chat completion; the raw response text is returned and cached on
  // success keyed by the full prompt.
  std::string chat_score(const std::string& prompt);

  // Total HTTP requests issued by this handle (includes retries).
  std::size_t http_requests_made() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  BackendConfig config_;
};

// Shared registry used by the study runner: id -> live handle.
class BackendSet {
 public:
  explicit BackendSet(const std::vector<BackendConfig>& configs);

  Backend& at(const std::string& backend_id) const;
  bool contains(const std::string& backend_id) const;

 private:
  std::unordered_map<std::string, std::unique_ptr<Backend>> backends_;
};

// Runs fn(0..n-1) on up to `workers` threads; exceptions propagate to the
// caller. Used to fan out scoring work bounded by a backend's in-flight cap.
void parallel_for(std::size_t n, std::size_t workers,
                  const std::function<void(std::size_t)>& fn);

}  // namespace interpeval

#endif  // INTERPEVAL_BACKENDS_HPP_
