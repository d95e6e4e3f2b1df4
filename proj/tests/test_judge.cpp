#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <atomic>
#include <chrono>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "interpeval/backends.hpp"
#include "interpeval/error.hpp"
#include "interpeval/judge.hpp"
#include "interpeval/net.hpp"
#include "test_util.hpp"

using interpeval::Backend;
using interpeval::BackendConfig;
using interpeval::BackendKind;
using interpeval::ConfigError;
using interpeval::DataError;
using interpeval::JudgeFailure;
using interpeval::PromptTemplate;
using interpeval::TranslationKind;
using interpeval::WindowedPair;
using nlohmann::json;

namespace {

// Chat stub that replays a scripted list of responses in request order.
class ScriptedChatServer {
 public:
  explicit ScriptedChatServer(std::vector<std::string> replies)
      : replies_(std::move(replies)) {
    server_.Post("/chat", [this](const httplib::Request& req, httplib::Response& res) {
      const json body = json::parse(req.body, nullptr, false);
      std::lock_guard lock(mutex_);
      prompts_.push_back(body["messages"][0]["content"].get<std::string>());
      const std::size_t i = served_++;
      const std::string& reply =
          replies_[i < replies_.size() ? i : replies_.size() - 1];
      res.set_content(
          json{{"choices", json::array({{{"message", {{"content", reply}}}}})}}.dump(),
          "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~ScriptedChatServer() {
    server_.stop();
    thread_.join();
  }

  BackendConfig backend_config() const {
    BackendConfig config;
    config.backend_id = "judge-http";
    config.kind = BackendKind::http_chat;
    config.endpoint_url = "http://127.0.0.1:" + std::to_string(port_) + "/chat";
    config.model_name = "stub-judge";
    config.max_in_flight = 1;
    config.retry_base = std::chrono::milliseconds(1);
    return config;
  }

  std::vector<std::string> prompts() const {
    std::lock_guard lock(mutex_);
    return prompts_;
  }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::vector<std::string> replies_;
  std::size_t served_ = 0;
  mutable std::mutex mutex_;
  std::vector<std::string> prompts_;
};

WindowedPair window(int index, const std::string& source, const std::string& target) {
  WindowedPair w;
  w.speech_id = "s1";
  w.translation_kind = TranslationKind::H;
  w.window_index = index;
  w.window_size = 1;
  w.member_indices = {index};
  w.source_text = source;
  w.target_text = target;
  return w;
}

BackendConfig mock_chat_config(std::uint64_t seed = 9) {
  BackendConfig config;
  config.backend_id = "judge";
  config.kind = BackendKind::mock_chat;
  config.model_name = "mock-judge";
  config.mock_seed = seed;
  return config;
}

}  // namespace

TEST_CASE("the default template asks for a 1..5 similarity in both languages") {
  const PromptTemplate tmpl = interpeval::default_prompt_template();
  CHECK_NOTHROW(interpeval::validate_prompt_template(tmpl));
  CHECK(tmpl.text.find("rate from 1 to 5") != std::string::npos);
  CHECK(tmpl.text.find("English and Spanish") != std::string::npos);
  CHECK(tmpl.text.find("1 is not similar and 5 very similar") != std::string::npos);

  const std::string prompt = interpeval::build_prompt(tmpl, "the cat", "el gato");
  CHECK(prompt.find("English: the cat") != std::string::npos);
  CHECK(prompt.find("Spanish: el gato") != std::string::npos);
  CHECK(prompt.find("{source}") == std::string::npos);
  CHECK(prompt.find("{target}") == std::string::npos);
}

TEST_CASE("templates require each placeholder exactly once") {
  CHECK_THROWS_AS(interpeval::validate_prompt_template({"t", "no placeholders"}),
                  ConfigError);
  CHECK_THROWS_AS(interpeval::validate_prompt_template({"t", "{source} only"}),
                  ConfigError);
  CHECK_THROWS_AS(interpeval::validate_prompt_template({"t", "{target} only"}),
                  ConfigError);
  CHECK_THROWS_AS(
      interpeval::validate_prompt_template({"t", "{source} {source} {target}"}),
      ConfigError);
  CHECK_NOTHROW(interpeval::validate_prompt_template({"t", "{target} before {source}"}));
}

TEST_CASE("substituted values are never rescanned for placeholders") {
  const PromptTemplate tmpl{"t", "S={source} T={target}"};
  CHECK(interpeval::build_prompt(tmpl, "a", "b") == "S=a T=b");
  CHECK(interpeval::build_prompt(tmpl, "{target}", "x") == "S={target} T=x");
  CHECK(interpeval::build_prompt(tmpl, "has {source} inside", "y") ==
        "S=has {source} inside T=y");
}

TEST_CASE("score parsing takes the first maximal digit run") {
  CHECK(interpeval::parse_score("4") == 4);
  CHECK(interpeval::parse_score("I would rate this 3 out of 5") == 3);
  CHECK(interpeval::parse_score("Rating: 5.") == 5);
  CHECK(interpeval::parse_score("03 is my answer") == 3);

  auto out_of_range = interpeval::try_parse_score("similarity: 10");
  CHECK_FALSE(out_of_range.score.has_value());
  CHECK(out_of_range.failure == JudgeFailure::out_of_range);
  CHECK(interpeval::try_parse_score("0").failure == JudgeFailure::out_of_range);
  CHECK(interpeval::try_parse_score("666").failure == JudgeFailure::out_of_range);
  CHECK(interpeval::try_parse_score("99999999999999999999").failure ==
        JudgeFailure::out_of_range);

  auto unparseable = interpeval::try_parse_score("maybe");
  CHECK(unparseable.failure == JudgeFailure::unparseable);
  CHECK(interpeval::try_parse_score("").failure == JudgeFailure::unparseable);
  CHECK_THROWS_AS(interpeval::parse_score("no digits here"), DataError);
  CHECK_THROWS_AS(interpeval::parse_score("7"), DataError);
}

TEST_CASE("judge_windows scores every window with the mock backend") {
  Backend backend(mock_chat_config());
  std::vector<WindowedPair> windows;
  for (int i = 0; i < 6; ++i) {
    windows.push_back(window(i, "source " + std::to_string(i), "target " + std::to_string(i)));
  }
  const auto judged =
      interpeval::judge_windows(backend, interpeval::default_prompt_template(), windows);
  REQUIRE(judged.size() == windows.size());
  for (std::size_t i = 0; i < judged.size(); ++i) {
    CHECK(judged[i].window_index == windows[i].window_index);
    REQUIRE(judged[i].outcome.ok());
    CHECK(*judged[i].outcome.score >= 1);
    CHECK(*judged[i].outcome.score <= 5);
    CHECK(judged[i].outcome.attempts == 1);
  }

  // SIM markers in the text drive the mock to a chosen digit.
  const auto steered = interpeval::judge_windows(
      backend, {"t", "{source} {target}"}, {window(0, "pair SIM=5", "x")});
  CHECK(*steered.front().outcome.score == 5);
}

TEST_CASE("a parse failure triggers one clarified retry") {
  ScriptedChatServer server({"maybe", "2"});
  Backend backend(server.backend_config());
  const auto judged = interpeval::judge_windows(
      backend, interpeval::default_prompt_template(), {window(0, "src", "tgt")}, 1);
  REQUIRE(judged.size() == 1);
  const auto& outcome = judged.front().outcome;
  CHECK(outcome.ok());
  CHECK(*outcome.score == 2);
  CHECK(outcome.attempts == 2);
  CHECK(outcome.raw_response == "2");

  const auto prompts = server.prompts();
  REQUIRE(prompts.size() == 2);
  CHECK(prompts[0].find(std::string(interpeval::kJudgeClarification)) == std::string::npos);
  CHECK(prompts[1].find(std::string(interpeval::kJudgeClarification)) != std::string::npos);
  // The clarification is appended exactly once even on the second retry.
  CHECK(prompts[1].find("English: src") != std::string::npos);
}

TEST_CASE("persistent nonsense exhausts retries as unparseable") {
  ScriptedChatServer server({"maybe"});
  Backend backend(server.backend_config());
  const auto judged = interpeval::judge_windows(
      backend, interpeval::default_prompt_template(), {window(0, "src", "tgt")}, 2);
  const auto& outcome = judged.front().outcome;
  CHECK_FALSE(outcome.ok());
  CHECK(outcome.failure_reason == JudgeFailure::unparseable);
  CHECK(outcome.attempts == 3);
  CHECK(outcome.raw_response == "maybe");
  CHECK(server.prompts().size() == 3);
}

TEST_CASE("out-of-range answers are retried then reported") {
  ScriptedChatServer server({"10", "4"});
  Backend backend(server.backend_config());
  const auto recovered = interpeval::judge_windows(
      backend, interpeval::default_prompt_template(), {window(0, "a", "b")}, 1);
  CHECK(*recovered.front().outcome.score == 4);
  CHECK(recovered.front().outcome.attempts == 2);

  ScriptedChatServer stubborn({"10"});
  Backend backend2(stubborn.backend_config());
  const auto failed = interpeval::judge_windows(
      backend2, interpeval::default_prompt_template(), {window(0, "a", "b")}, 1);
  CHECK(failed.front().outcome.failure_reason == JudgeFailure::out_of_range);
  CHECK(failed.front().outcome.attempts == 2);
}

TEST_CASE("zero retries means a single attempt") {
  ScriptedChatServer server({"maybe", "4"});
  Backend backend(server.backend_config());
  const auto judged = interpeval::judge_windows(
      backend, interpeval::default_prompt_template(), {window(0, "a", "b")}, 0);
  CHECK_FALSE(judged.front().outcome.ok());
  CHECK(judged.front().outcome.attempts == 1);
  CHECK_THROWS_AS(interpeval::judge_windows(backend,
                                            interpeval::default_prompt_template(),
                                            {window(0, "a", "b")}, -1),
                  ConfigError);
}

TEST_CASE("backend failures become backend_error outcomes, not exceptions") {
  BackendConfig config;
  config.backend_id = "judge-dead";
  config.kind = BackendKind::http_chat;
  config.endpoint_url = "http://127.0.0.1:1/chat";
  config.model_name = "stub";
  config.max_retries = 0;
  config.retry_base = std::chrono::milliseconds(1);
  Backend backend(config);
  const auto judged = interpeval::judge_windows(
      backend, interpeval::default_prompt_template(),
      {window(0, "a", "b"), window(1, "c", "d")}, 3);
  REQUIRE(judged.size() == 2);
  for (const auto& jw : judged) {
    CHECK(jw.outcome.failure_reason == JudgeFailure::backend_error);
    CHECK(jw.outcome.attempts == 1);
    CHECK_FALSE(jw.outcome.raw_response.empty());
  }
}

TEST_CASE("judge_windows rejects non-chat backends") {
  BackendConfig config;
  config.backend_id = "emb";
  config.kind = BackendKind::mock_embeddings;
  config.model_name = "m";
  config.embedding_dim = 4;
  Backend backend(config);
  CHECK_THROWS_AS(interpeval::judge_windows(backend,
                                            interpeval::default_prompt_template(),
                                            {window(0, "a", "b")}),
                  ConfigError);
}

TEST_CASE("judged_scores keeps successes and write_failures_csv the rest") {
  ScriptedChatServer server({"4", "maybe"});
  Backend backend(server.backend_config());
  const auto judged = interpeval::judge_windows(
      backend, interpeval::default_prompt_template(),
      {window(0, "good pair", "buen par"), window(1, "bad pair", "mal par")}, 0);

  const auto scores = interpeval::judged_scores(judged, "judge-m");
  REQUIRE(scores.size() == 1);
  CHECK(scores.front().method_id == "judge-m");
  CHECK(scores.front().scale == interpeval::ScoreScale::likert5);
  CHECK(scores.front().value == 4.0);
  CHECK(scores.front().window_index == 0);

  testutil::TempDir tmp;
  const auto path = tmp / "failures.csv";
  interpeval::write_failures_csv(judged, "judge-m", path);
  const std::string contents = testutil::read_file(path);
  CHECK(contents.find("speech_id,translation_kind,method_id,window_size,window_index,"
                      "failure_reason,attempts") != std::string::npos);
  CHECK(contents.find("s1,H,judge-m,1,1,unparseable,1") != std::string::npos);
  CHECK(contents.find("judge-m,1,0") == std::string::npos);
}
