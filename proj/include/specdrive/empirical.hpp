#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "specdrive/automata.hpp"
#include "specdrive/logic.hpp"
#include "specdrive/rng.hpp"

namespace specdrive {

struct RunConfig {
  int max_steps = 12;
  int num_runs = 200;
  std::uint64_t seed = 1;
};

// Discrete-time environment: a seeded walk over a scenario model's states,
// successor choice biased by per-proposition toggle probabilities. Tests can
// pin the observations instead, which marks the world as not model-derived.
class ScenarioWorld {
public:
  static ScenarioWorld from_model(std::string kind, TransitionSystem model,
                                  std::map<std::string, double> toggle_prob = {});
  static ScenarioWorld pinned(std::string kind, std::vector<std::string> props, NameSet assignment);

  void reset(std::uint64_t seed);
  const NameSet& observations() const;
  void advance();

  const std::string& kind() const { return kind_; }
  const std::vector<std::string>& props() const { return props_; }
  bool model_derived() const { return model_derived_; }
  const TransitionSystem& model() const { return model_; }

private:
  std::string kind_;
  std::vector<std::string> props_;
  TransitionSystem model_;
  bool model_derived_ = false;
  std::map<std::string, double> toggle_prob_;
  std::optional<NameSet> pinned_;
  int current_ = 0;
  Rng rng_{0};
};

// Runs the controller in the world: observe, fire the first enabled
// transition, record the step, advance the world. A turn ends the episode one
// step later; stop and go_straight persist.
FiniteTrace ground(const ControllerFsa& controller, ScenarioWorld& world, const RunConfig& cfg,
                   std::uint64_t run_seed);

struct SatisfactionStats {
  struct Row {
    std::string spec;
    int satisfying_runs = 0;
    int total_runs = 0;
    double p() const { return total_runs == 0 ? 0.0 : static_cast<double>(satisfying_runs) / total_runs; }
  };
  std::vector<Row> rows;
  const Row* find(const std::string& spec) const;
};

// num_runs grounded traces with seeds seed, seed+1, ...; each trace scored
// against each spec under finite-trace semantics.
SatisfactionStats evaluate_runs(const ControllerFsa& controller, const ScenarioWorld& world,
                                const RunConfig& cfg,
                                const std::vector<std::pair<std::string, FormulaPtr>>& specs);

struct ProbeRow {
  std::string spec;
  bool formal = false;
  bool empirical_all = false;
};

// Compares the model-checking verdict with exhaustive sampling in the
// world generated from the same model.
std::vector<ProbeRow> theorem1_probe(const TransitionSystem& model, const ControllerFsa& controller,
                                     const std::vector<std::pair<std::string, FormulaPtr>>& specs,
                                     const RunConfig& cfg);

// Same, against a caller-supplied world; rejects worlds whose dynamics are
// not model-derived.
std::vector<ProbeRow> theorem1_probe(const ScenarioWorld& world, const ControllerFsa& controller,
                                     const std::vector<std::pair<std::string, FormulaPtr>>& specs,
                                     const RunConfig& cfg);

}  // namespace specdrive
