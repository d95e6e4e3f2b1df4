#include "interpeval/backends.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>
#include <regex>
#include <semaphore>
#include <thread>

#include "interpeval/error.hpp"
#include "interpeval/hash.hpp"
#include "interpeval/net.hpp"
#include "interpeval/text.hpp"

namespace interpeval {

using nlohmann::json;

const char* to_string(BackendKind kind) {
  switch (kind) {
    case BackendKind::http_embeddings: return "http_embeddings";
    case BackendKind::http_chat: return "http_chat";
    case BackendKind::mock_embeddings: return "mock_embeddings";
    case BackendKind::mock_chat: return "mock_chat";
  }
  return "unknown";
}

std::optional<BackendKind> parse_backend_kind(std::string_view s) {
  if (s == "http_embeddings") return BackendKind::http_embeddings;
  if (s == "http_chat") return BackendKind::http_chat;
  if (s == "mock_embeddings") return BackendKind::mock_embeddings;
  if (s == "mock_chat") return BackendKind::mock_chat;
  return std::nullopt;
}

bool is_embeddings_kind(BackendKind kind) {
  return kind == BackendKind::http_embeddings || kind == BackendKind::mock_embeddings;
}

bool is_chat_kind(BackendKind kind) {
  return kind == BackendKind::http_chat || kind == BackendKind::mock_chat;
}

void validate_backend_config(const BackendConfig& config) {
  if (config.backend_id.empty()) {
    throw ConfigError("backend_id must be nonempty");
  }
  if (config.model_name.empty()) {
    throw ConfigError("backend \"" + config.backend_id + "\": model_name required");
  }
  const bool is_http = config.kind == BackendKind::http_embeddings ||
                       config.kind == BackendKind::http_chat;
  if (is_http && config.endpoint_url.empty()) {
    throw ConfigError("backend \"" + config.backend_id +
                      "\": endpoint_url required for http kinds");
  }
  if (config.kind == BackendKind::mock_embeddings) {
    if (!config.embedding_dim) {
      throw ConfigError("backend \"" + config.backend_id +
                        "\": embedding_dim required for mock_embeddings");
    }
  }
  if (config.embedding_dim && *config.embedding_dim < 2) {
    throw ConfigError("backend \"" + config.backend_id +
                      "\": embedding_dim must be >= 2");
  }
  if (config.max_in_flight < 1) {
    throw ConfigError("backend \"" + config.backend_id + "\": max_in_flight must be >= 1");
  }
  if (config.max_retries < 0) {
    throw ConfigError("backend \"" + config.backend_id + "\": max_retries must be >= 0");
  }
  if (config.batch_size < 1) {
    throw ConfigError("backend \"" + config.backend_id + "\": batch_size must be >= 1");
  }
}

EmbeddingVector mock_embedding(std::string_view text, int dim, std::uint64_t seed) {
  if (dim < 2) {
    throw ConfigError("mock_embedding: dim must be >= 2, got " + std::to_string(dim));
  }
  CounterRng rng(hash64(seed, normalize_text(text)));
  EmbeddingVector v;
  v.values.resize(static_cast<std::size_t>(dim));
  double norm_sq = 0.0;
  for (auto& value : v.values) {
    value = 2.0 * rng.next_unit() - 1.0;
    norm_sq += value * value;
  }
  if (norm_sq == 0.0) {
    v.values[0] = 1.0;  // unreachable in practice
    norm_sq = 1.0;
  }
  const double inv_norm = 1.0 / std::sqrt(norm_sq);
  for (auto& value : v.values) {
    value *= inv_norm;
  }
  return v;
}

std::string mock_chat_response(std::string_view prompt, std::uint64_t seed) {
  static const std::regex marker("SIM=([1-5])");
  std::cmatch m;
  if (std::regex_search(prompt.data(), prompt.data() + prompt.size(), m, marker)) {
    return m[1].str();
  }
  const int digit = 1 + static_cast<int>(hash64(seed, prompt) % 5);
  return std::to_string(digit);
}

std::string cache_digest(std::string_view backend_id, std::string_view model_name,
                         std::string_view text) {
  std::string payload;
  payload.reserve(backend_id.size() + model_name.size() + text.size() + 2);
  payload.append(backend_id);
  payload.push_back('\x1f');
  payload.append(model_name);
  payload.push_back('\x1f');
  payload.append(text);
  return sha256_hex(payload);
}

ResponseCache::ResponseCache(std::filesystem::path file, std::string model_name)
    : file_(std::move(file)), model_name_(std::move(model_name)) {
  std::ifstream in(file_);
  if (!in) {
    return;
  }
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    json record = json::parse(line, nullptr, false);
    // A torn trailing line from a concurrent writer is skipped, not fatal.
    if (record.is_discarded() || !record.is_object() || !record.contains("digest") ||
        !record.contains("result")) {
      continue;
    }
    entries_[record["digest"].get<std::string>()] = record["result"];
  }
}

std::optional<json> ResponseCache::lookup(const std::string& digest) const {
  std::lock_guard lock(mutex_);
  auto it = entries_.find(digest);
  if (it == entries_.end()) {
    return std::nullopt;
  }
  return it->second;
}

void ResponseCache::store(const std::string& digest, const json& result) {
  std::lock_guard lock(mutex_);
  auto [it, inserted] = entries_.emplace(digest, result);
  if (!inserted) {
    return;
  }
  std::ofstream out(file_, std::ios::app | std::ios::binary);
  if (!out) {
    throw DataError("cannot append to cache file " + file_.string());
  }
  json record = {{"digest", digest}, {"model", model_name_}, {"result", result}};
  out << record.dump() << '\n';
  out.flush();
}

std::size_t ResponseCache::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

namespace {

struct ParsedUrl {
  std::string base;  // scheme://host[:port]
  std::string path;  // leading slash, "/" when absent
};

ParsedUrl parse_url(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigError("endpoint_url must include a scheme: " + url);
  }
  auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) {
    return {url, "/"};
  }
  return {url.substr(0, path_start), url.substr(path_start)};
}

std::string body_excerpt(const std::string& body) {
  constexpr std::size_t kMax = 200;
  if (body.size() <= kMax) {
    return body;
  }
  return body.substr(0, kMax) + "...";
}

}  // namespace

struct Backend::Impl {
  explicit Impl(const BackendConfig& config)
      : semaphore(config.max_in_flight), jitter_rng(std::random_device{}()) {}

  std::counting_semaphore<> semaphore;
  std::atomic<std::size_t> requests_made{0};
  std::unique_ptr<ResponseCache> cache;
  std::optional<std::string> api_key;

  std::mutex jitter_mutex;
  std::mt19937_64 jitter_rng;

  double jitter_unit() {
    std::lock_guard lock(jitter_mutex);
    return std::uniform_real_distribution<double>(0.0, 1.0)(jitter_rng);
  }

  json post_json_with_retries(const BackendConfig& config, const json& body);
};

Backend::Backend(BackendConfig config) : config_(std::move(config)) {
  validate_backend_config(config_);
  impl_ = std::make_unique<Impl>(config_);
  if (config_.cache_dir) {
    std::filesystem::create_directories(*config_.cache_dir);
    impl_->cache = std::make_unique<ResponseCache>(
        *config_.cache_dir / (config_.backend_id + ".jsonl"), config_.model_name);
  }
  if (!config_.api_key_env.empty()) {
    const char* key = std::getenv(config_.api_key_env.c_str());
    if (key == nullptr || *key == '\0') {
      throw ConfigError("backend \"" + config_.backend_id + "\": API key env var " +
                        config_.api_key_env + " is not set");
    }
    impl_->api_key = key;
  }
}

Backend::~Backend() = default;

std::size_t Backend::http_requests_made() const { return impl_->requests_made.load(); }

// POSTs `body` with retries: 5xx and transport failures back off with full
// jitter (base doubling per attempt); other non-2xx statuses fail
// immediately with a body excerpt.
json Backend::Impl::post_json_with_retries(const BackendConfig& config, const json& body) {
  const ParsedUrl url = parse_url(config.endpoint_url);
  const std::string payload = body.dump();

  for (int attempt = 0;; ++attempt) {
    httplib::Client client(url.base);
    client.set_connection_timeout(
        std::chrono::duration_cast<std::chrono::seconds>(config.timeout).count(),
        (config.timeout.count() % 1000) * 1000);
    client.set_read_timeout(config.timeout);
    client.set_write_timeout(config.timeout);
    httplib::Headers headers;
    if (api_key) {
      headers.emplace("Authorization", "Bearer " + *api_key);
    }

    semaphore.acquire();
    requests_made.fetch_add(1);
    httplib::Result result = client.Post(url.path, headers, payload, "application/json");
    semaphore.release();

    if (result && result->status >= 200 && result->status < 300) {
      json parsed = json::parse(result->body, nullptr, false);
      if (parsed.is_discarded()) {
        throw BackendError("backend \"" + config.backend_id +
                           "\": response is not valid JSON: " + body_excerpt(result->body));
      }
      return parsed;
    }

    const bool retryable = !result || result->status >= 500;
    if (!retryable) {
      throw BackendError("backend \"" + config.backend_id + "\": HTTP " +
                         std::to_string(result->status) + ": " +
                         body_excerpt(result->body));
    }
    if (attempt >= config.max_retries) {
      std::string reason = result ? "HTTP " + std::to_string(result->status)
                                  : "transport error: " + httplib::to_string(result.error());
      throw BackendError("backend \"" + config.backend_id + "\": " + reason + " after " +
                         std::to_string(attempt + 1) + " attempts (retries exhausted)");
    }
    const double ceiling =
        static_cast<double>(config.retry_base.count()) * std::pow(2.0, attempt);
    const auto delay =
        std::chrono::milliseconds(static_cast<long long>(ceiling * jitter_unit()));
    std::this_thread::sleep_for(delay);
  }
}

namespace {

EmbeddingVector embedding_from_json(const json& array, const BackendConfig& config) {
  if (!array.is_array() || array.empty()) {
    throw BackendError("backend \"" + config.backend_id +
                       "\": embedding payload is not a nonempty array");
  }
  EmbeddingVector v;
  v.values.reserve(array.size());
  for (const auto& item : array) {
    if (!item.is_number()) {
      throw BackendError("backend \"" + config.backend_id +
                         "\": embedding contains a non-numeric entry");
    }
    const double value = item.get<double>();
    if (!std::isfinite(value)) {
      throw BackendError("backend \"" + config.backend_id +
                         "\": embedding contains a non-finite value");
    }
    v.values.push_back(value);
  }
  if (config.embedding_dim && v.values.size() !=
                                  static_cast<std::size_t>(*config.embedding_dim)) {
    throw BackendError("backend \"" + config.backend_id + "\": dimension mismatch: got " +
                       std::to_string(v.values.size()) + ", config declares " +
                       std::to_string(*config.embedding_dim));
  }
  return v;
}

}  // namespace

std::vector<EmbeddingVector> Backend::embed_texts(const std::vector<std::string>& texts) {
  if (!is_embeddings_kind(config_.kind)) {
    throw ConfigError("backend \"" + config_.backend_id +
                      "\" is not an embeddings backend");
  }
  for (std::size_t i = 0; i < texts.size(); ++i) {
    if (texts[i].empty()) {
      throw DataError("embed_texts: empty text at position " + std::to_string(i));
    }
  }

  std::vector<EmbeddingVector> results(texts.size());
  std::vector<std::size_t> misses;
  std::vector<std::string> digests(texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) {
    // Embedding cache keys hash the normalized text; chat keys hash the
    // full prompt as sent.
    digests[i] =
        cache_digest(config_.backend_id, config_.model_name, normalize_text(texts[i]));
    if (impl_->cache) {
      if (auto hit = impl_->cache->lookup(digests[i])) {
        results[i] = embedding_from_json(*hit, config_);
        continue;
      }
    }
    misses.push_back(i);
  }

  if (config_.kind == BackendKind::mock_embeddings) {
    for (std::size_t i : misses) {
      results[i] = mock_embedding(texts[i], *config_.embedding_dim, config_.mock_seed);
      if (impl_->cache) {
        impl_->cache->store(digests[i], json(results[i].values));
      }
    }
  } else if (!misses.empty()) {
    const std::size_t batch = static_cast<std::size_t>(config_.batch_size);
    const std::size_t n_batches = (misses.size() + batch - 1) / batch;
    std::vector<std::vector<EmbeddingVector>> batch_results(n_batches);

    parallel_for(n_batches, static_cast<std::size_t>(config_.max_in_flight),
                 [&](std::size_t b) {
                   const std::size_t begin = b * batch;
                   const std::size_t end = std::min(begin + batch, misses.size());
                   json input = json::array();
                   for (std::size_t j = begin; j < end; ++j) {
                     input.push_back(texts[misses[j]]);
                   }
                   json body = {{"model", config_.model_name}, {"input", input}};
                   json response = impl_->post_json_with_retries(config_, body);

                   if (!response.contains("data") || !response["data"].is_array() ||
                       response["data"].size() != end - begin) {
                     throw BackendError("backend \"" + config_.backend_id +
                                        "\": response data has wrong length");
                   }
                   std::vector<EmbeddingVector> ordered(end - begin);
                   std::vector<bool> filled(end - begin, false);
                   for (const auto& item : response["data"]) {
                     if (!item.contains("index") || !item["index"].is_number_integer()) {
                       throw BackendError("backend \"" + config_.backend_id +
                                          "\": response entry missing index");
                     }
                     const long long idx = item["index"].get<long long>();
                     if (idx < 0 || idx >= static_cast<long long>(end - begin) ||
                         filled[static_cast<std::size_t>(idx)]) {
                       throw BackendError("backend \"" + config_.backend_id +
                                          "\": response index out of range or duplicated");
                     }
                     ordered[static_cast<std::size_t>(idx)] =
                         embedding_from_json(item.at("embedding"), config_);
                     filled[static_cast<std::size_t>(idx)] = true;
                   }
                   batch_results[b] = std::move(ordered);
                 });

    for (std::size_t b = 0; b < n_batches; ++b) {
      const std::size_t begin = b * batch;
      for (std::size_t j = 0; j < batch_results[b].size(); ++j) {
        const std::size_t i = misses[begin + j];
        results[i] = std::move(batch_results[b][j]);
        if (impl_->cache) {
          impl_->cache->store(digests[i], json(results[i].values));
        }
      }
    }
  }

  // Dimension must be constant across the whole call, cached or fresh.
  for (std::size_t i = 1; i < results.size(); ++i) {
    if (results[i].dim() != results[0].dim()) {
      throw BackendError("backend \"" + config_.backend_id +
                         "\": inconsistent embedding dimensions (" +
                         std::to_string(results[0].dim()) + " vs " +
                         std::to_string(results[i].dim()) + ")");
    }
  }
  return results;
}

std::string Backend::chat_score(const std::string& prompt) {
  if (!is_chat_kind(config_.kind)) {
    throw ConfigError("backend \"" + config_.backend_id + "\" is not a chat backend");
  }
  const std::string digest =
      cache_digest(config_.backend_id, config_.model_name, prompt);
  if (impl_->cache) {
    if (auto hit = impl_->cache->lookup(digest)) {
      if (hit->is_string()) {
        return hit->get<std::string>();
      }
    }
  }

  std::string response;
  if (config_.kind == BackendKind::mock_chat) {
    response = mock_chat_response(prompt, config_.mock_seed);
  } else {
    json body = {{"model", config_.model_name},
                 {"messages", json::array({{{"role", "user"}, {"content", prompt}}})},
                 {"temperature", 0}};
    json parsed = impl_->post_json_with_retries(config_, body);
    try {
      response = parsed.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception&) {
      throw BackendError("backend \"" + config_.backend_id +
                         "\": response missing choices[0].message.content");
    }
  }
  if (impl_->cache) {
    impl_->cache->store(digest, json(response));
  }
  return response;
}

BackendSet::BackendSet(const std::vector<BackendConfig>& configs) {
  for (const auto& config : configs) {
    if (backends_.count(config.backend_id)) {
      throw ConfigError("duplicate backend_id \"" + config.backend_id + "\"");
    }
    backends_.emplace(config.backend_id, std::make_unique<Backend>(config));
  }
}

Backend& BackendSet::at(const std::string& backend_id) const {
  auto it = backends_.find(backend_id);
  if (it == backends_.end()) {
    throw ConfigError("unknown backend_id \"" + backend_id + "\"");
  }
  return *it->second;
}

bool BackendSet::contains(const std::string& backend_id) const {
  return backends_.count(backend_id) > 0;
}

void parallel_for(std::size_t n, std::size_t workers,
                  const std::function<void(std::size_t)>& fn) {
  if (n == 0) {
    return;
  }
  workers = std::min(workers == 0 ? 1 : workers, n);
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) {
      fn(i);
    }
    return;
  }

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) {
          return;
        }
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!first_error) {
            first_error = std::current_exception();
          }
        }
      }
    });
  }
  for (auto& t : pool) {
    t.join();
  }
  if (first_error) {
    std::rethrow_exception(first_error);
  }
}

}  // namespace interpeval
