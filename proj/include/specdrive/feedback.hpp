#pragma once

#include <optional>
#include <string>
#include <vector>

#include "specdrive/empirical.hpp"
#include "specdrive/modelcheck.hpp"

namespace specdrive {

struct CandidateResponse {
  std::string prompt_id;
  std::string prompt_text;
  std::string raw_text;  // aligned step-DSL text
  std::optional<ControllerFsa> controller;
  std::optional<VerificationReport> report;
  std::optional<SatisfactionStats> stats;  // empirical mode
  bool alignment_failed = false;
  std::string failure_reason;

  int score() const { return alignment_failed || !report ? 0 : report->satisfied_count; }
};

enum class ScoreMode { formal, empirical };

struct ScoringContext {
  const TransitionSystem* model = nullptr;          // formal mode
  const ScenarioWorld* world = nullptr;             // empirical mode
  RunConfig run_config;
  std::vector<std::pair<std::string, FormulaPtr>> specs;
  PropSet props;
  ScoreMode mode = ScoreMode::formal;
};

// Parses the response's steps, builds and completes the controller, and
// scores it. Parse and alignment failures fold into alignment_failed with
// score 0 rather than escaping.
CandidateResponse score(CandidateResponse resp, const ScoringContext& ctx);

struct PreferencePair {
  std::string prompt;
  std::string chosen;
  std::string rejected;
  int score_chosen = 0;
  int score_rejected = 0;
};

// Groups responses by prompt, drops exact-duplicate texts, and emits one pair
// per unordered pair with strictly different scores (ties are skipped).
struct PairingSummary {
  std::size_t prompts = 0;
  std::size_t responses = 0;
  std::size_t pairs = 0;
  std::size_t ties_skipped = 0;
  std::size_t duplicates_dropped = 0;
};

std::vector<PreferencePair> make_pairs(const std::vector<CandidateResponse>& responses,
                                       PairingSummary* summary = nullptr);

// Line-delimited records with fields prompt/chosen/rejected/score_chosen/
// score_rejected. Returns the number written.
std::size_t emit_dataset(const std::vector<PreferencePair>& pairs, std::ostream& out);
std::size_t emit_dataset(const std::vector<PreferencePair>& pairs, const std::string& path);

std::vector<PreferencePair> read_dataset(const std::string& path);

}  // namespace specdrive
