#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "specdrive/logic.hpp"

namespace specdrive {

struct EndpointConfig {
  std::string base_url;      // e.g. http://localhost:8000
  std::string api_key;       // from the environment
  std::string model;         // backend model identifier
  int timeout_ms = 30000;
  int max_retries = 3;
  std::string prompt_profile = "plain";  // or "llama2_inst"
};

struct GenerationRequest {
  std::string prompt;
  int num_samples = 1;
  double temperature = 0.8;
  std::uint64_t seed = 0;
  EndpointConfig endpoint;
};

struct PromptTemplate {
  static std::string task_prompt(const std::string& task);
  // embeds the full canonical proposition and action vocabularies
  static std::string align_prompt(const std::string& steps_text, const PropSet& props);
  static std::string wrap(const std::string& prompt, const std::string& profile);
};

class Backend {
public:
  virtual ~Backend() = default;
  virtual std::vector<std::string> generate(const GenerationRequest& req) = 0;
  virtual std::string align(const std::string& raw_steps, const PropSet& props) = 0;
};

// Deterministic offline backend serving a fixture corpus:
//   <dir>/<task_slug>/response_N.raw.txt      free-text step list
//   <dir>/<task_slug>/response_N.aligned.txt  its bracketed form
// generate() serves raw fixtures in order, cycling when m exceeds the corpus;
// align() matches a known raw text, falling back to a phrase dictionary.
class MockBackend : public Backend {
public:
  explicit MockBackend(std::string fixture_dir);
  std::vector<std::string> generate(const GenerationRequest& req) override;
  std::string align(const std::string& raw_steps, const PropSet& props) override;

private:
  std::string dir_;
};

struct HttpCall {
  std::string url;
  std::string body;
  std::string api_key;
  int timeout_ms = 30000;
};

struct HttpResult {
  bool connected = false;
  int status = 0;
  std::string body;
};

using Transport = std::function<HttpResult(const HttpCall&)>;

// Chat-completions-shaped client with retry/backoff. The transport is
// injectable so tests never open sockets.
class HttpBackend : public Backend {
public:
  explicit HttpBackend(EndpointConfig cfg, Transport transport = {});
  std::vector<std::string> generate(const GenerationRequest& req) override;
  std::string align(const std::string& raw_steps, const PropSet& props) override;

private:
  std::vector<std::string> complete(const std::string& prompt, int n, double temperature);
  EndpointConfig cfg_;
  Transport transport_;
};

// name is "mock" or "http"
std::unique_ptr<Backend> make_backend(const std::string& name, const std::string& fixture_dir,
                                      const EndpointConfig& cfg, Transport transport = {});

// Dictionary-based line aligner shared by the mock backend; maps free text
// like "If the traffic light turns green, start moving forward." to
// "<if> <green traffic light>, <go straight>.". Lines it cannot interpret
// pass through unchanged and surface later as alignment failures.
std::string dictionary_align(const std::string& raw_steps, const PropSet& props);

}  // namespace specdrive
