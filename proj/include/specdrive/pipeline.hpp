#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "specdrive/feedback.hpp"
#include "specdrive/lmclient.hpp"

namespace specdrive {

struct RankOptions {
  std::string prompts_path;
  std::string backend = "mock";
  std::string fixture_dir;
  std::string model_path;
  std::string specs_path;
  std::string out_path;
  int samples = 2;
  ScoreMode mode = ScoreMode::formal;
  std::uint64_t seed = 1;
  int jobs = 1;
  int empirical_runs = 50;
  int empirical_max_steps = 12;
  EndpointConfig endpoint;
  Transport transport;  // tests inject a fake transport here
};

struct RankSummary {
  std::size_t prompts = 0;
  std::size_t responses = 0;
  std::size_t pairs = 0;
  std::size_t ties_skipped = 0;
  std::size_t duplicates_dropped = 0;
  std::size_t alignment_failures = 0;
  std::vector<std::string> prompt_errors;  // pipeline continues past these
};

// sample -> align -> score -> pair -> emit
RankSummary run_rank_pipeline(const RankOptions& opts);

std::string rank_summary_records(const RankSummary& s);
std::string rank_summary_text(const RankSummary& s);

}  // namespace specdrive
