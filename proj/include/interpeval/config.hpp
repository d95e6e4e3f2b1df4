#ifndef INTERPEVAL_CONFIG_HPP_
#define INTERPEVAL_CONFIG_HPP_

#include <filesystem>
#include <string_view>

#include "interpeval/study.hpp"

namespace interpeval {

// Study configuration file: an INI/TOML-style text format.
//
//   [study]
//   corpus = "corpus.jsonl"        # paths resolve relative to this file
//   ratings = "ratings.csv"
//   output_dir = "out"
//   granularity = "segment"        # or "speech"
//   dimension = "accuracy"         # or "intelligibility"
//   window_sizes = [1, 2, 3, 4, 5]
//   window_policy = "tumbling"     # or "sliding"
//   correlation_unit = "per_speech" # or "pooled"
//   seed = 42
//   judge_retries = 2
//   judge_failure_threshold = 0.05
//
//   [backend.emb]
//   kind = "mock_embeddings"       # or http_embeddings/http_chat/mock_chat
//   model_name = "mock-emb"
//   embedding_dim = 64
//   # endpoint_url, api_key_env, max_in_flight, max_retries, timeout_ms,
//   # retry_base_ms, batch_size, cache_dir, mock_seed
//
//   [method.cosine]
//   backend = "emb"
//   mode = "embedding_cosine"      # or "llm_judge" (+ optional prompt_template)
//
// Values are quoted strings, integers, floats, booleans, or arrays of
// integers. Unknown sections or keys are configuration errors.
StudyConfig load_study_config(const std::filesystem::path& path);

// Parses from text; relative paths resolve against base_dir and error
// messages name `origin`.
StudyConfig parse_study_config(std::string_view text,
                               const std::filesystem::path& base_dir,
                               std::string_view origin = "<config>");

}  // namespace interpeval

#endif  // INTERPEVAL_CONFIG_HPP_
