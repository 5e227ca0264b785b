#include "specdrive/empirical.hpp"

#include <algorithm>

#include "specdrive/modelcheck.hpp"
#include "specdrive/product.hpp"

namespace specdrive {

ScenarioWorld ScenarioWorld::from_model(std::string kind, TransitionSystem model,
                                        std::map<std::string, double> toggle_prob) {
  ScenarioWorld w;
  w.kind_ = std::move(kind);
  w.props_ = model.props();
  w.model_ = std::move(model);
  w.model_derived_ = true;
  w.toggle_prob_ = std::move(toggle_prob);
  if (w.model_.states().empty()) throw ValidationError("scenario model has no states");
  return w;
}

ScenarioWorld ScenarioWorld::pinned(std::string kind, std::vector<std::string> props, NameSet assignment) {
  ScenarioWorld w;
  w.kind_ = std::move(kind);
  w.props_ = std::move(props);
  for (const auto& a : assignment)
    if (std::find(w.props_.begin(), w.props_.end(), a) == w.props_.end())
      throw UnknownPropositionError(a);
  w.pinned_ = std::move(assignment);
  w.model_derived_ = false;
  return w;
}

void ScenarioWorld::reset(std::uint64_t seed) {
  rng_ = Rng(seed);
  if (!pinned_) current_ = static_cast<int>(rng_.below(model_.states().size()));
}

const NameSet& ScenarioWorld::observations() const {
  if (pinned_) return *pinned_;
  return model_.label(current_);
}

void ScenarioWorld::advance() {
  if (pinned_) return;
  const auto& succ = model_.successors(current_);
  if (succ.empty()) return;  // terminal scenario state; the world holds still
  // successor weight: toggled propositions pay their toggle probability,
  // unchanged ones the complement (default 0.5 on both sides)
  std::vector<double> weights;
  weights.reserve(succ.size());
  double total = 0.0;
  const NameSet& here = model_.label(current_);
  for (int to : succ) {
    const NameSet& there = model_.label(to);
    double w = 1.0;
    for (const auto& p : props_) {
      const bool a = here.count(p) > 0, b = there.count(p) > 0;
      auto it = toggle_prob_.find(p);
      const double tp = it == toggle_prob_.end() ? 0.5 : it->second;
      w *= (a != b) ? tp : 1.0 - tp;
    }
    weights.push_back(w);
    total += w;
  }
  if (total <= 0.0) {
    current_ = succ[rng_.below(succ.size())];
    return;
  }
  double roll = rng_.unit() * total;
  for (std::size_t i = 0; i < succ.size(); ++i) {
    roll -= weights[i];
    if (roll <= 0.0) {
      current_ = succ[i];
      return;
    }
  }
  current_ = succ.back();
}

FiniteTrace ground(const ControllerFsa& controller, ScenarioWorld& world, const RunConfig& cfg,
                   std::uint64_t run_seed) {
  if (cfg.max_steps < 1) throw ValidationError("max_steps must be >= 1");
  NameSet world_props(world.props().begin(), world.props().end());
  for (const auto& p : controller.input_props())
    if (!world_props.count(p))
      throw PropMismatchError("controller reads proposition '" + p + "' the world does not expose");

  NameSet input_set(controller.input_props().begin(), controller.input_props().end());
  world.reset(run_seed);

  FiniteTrace trace;
  int state = controller.init_state();
  int end_after = -1;  // step index after which the episode closes
  for (int t = 0; t < cfg.max_steps; ++t) {
    const NameSet& sigma = world.observations();
    Letter sigma_in;
    for (const auto& a : sigma)
      if (input_set.count(a)) sigma_in.insert(a);

    const ControllerTransition* chosen = nullptr;
    for (int ti : controller.transitions_from(state)) {
      const ControllerTransition& tr = controller.transitions()[ti];
      if (eval_letter_bool(tr.guard, sigma_in)) {
        chosen = &tr;
        break;  // ties broken by declaration order
      }
    }
    if (!chosen)
      throw ValidationError("controller has no enabled transition; run complete_controller first");

    TraceStep step;
    step.observations = sigma;
    step.actions = effective_actions(controller, chosen->outputs, chosen->noop, sigma);
    trace.steps.push_back(std::move(step));

    if (end_after < 0 && !chosen->noop &&
        (chosen->outputs.count("turn_left") || chosen->outputs.count("turn_right")))
      end_after = t + 1;  // the maneuver completes on the following step
    state = chosen->to;
    if (end_after >= 0 && t >= end_after) break;
    world.advance();
  }
  return trace;
}

const SatisfactionStats::Row* SatisfactionStats::find(const std::string& spec) const {
  for (const auto& r : rows)
    if (r.spec == spec) return &r;
  return nullptr;
}

SatisfactionStats evaluate_runs(const ControllerFsa& controller, const ScenarioWorld& world,
                                const RunConfig& cfg,
                                const std::vector<std::pair<std::string, FormulaPtr>>& specs) {
  if (cfg.num_runs < 1) throw ValidationError("num_runs must be >= 1");
  SatisfactionStats stats;
  for (const auto& [name, phi] : specs) stats.rows.push_back({name, 0, 0});
  for (int k = 0; k < cfg.num_runs; ++k) {
    ScenarioWorld run_world = world;  // each run owns its world instance
    FiniteTrace trace = ground(controller, run_world, cfg, cfg.seed + static_cast<std::uint64_t>(k));
    for (std::size_t i = 0; i < specs.size(); ++i) {
      stats.rows[i].total_runs += 1;
      if (eval_finite(specs[i].second, trace, 0)) stats.rows[i].satisfying_runs += 1;
    }
  }
  return stats;
}

std::vector<ProbeRow> theorem1_probe(const ScenarioWorld& world, const ControllerFsa& controller,
                                     const std::vector<std::pair<std::string, FormulaPtr>>& specs,
                                     const RunConfig& cfg) {
  if (!world.model_derived()) throw IncompleteWorldError();
  const ProductAutomaton prod = build_product(world.model(), controller);
  std::vector<ProbeRow> out;
  for (const auto& [name, phi] : specs) {
    ProbeRow row;
    row.spec = name;
    row.formal = check(prod, name, phi).holds;
    row.empirical_all = true;
    for (int k = 0; k < cfg.num_runs; ++k) {
      ScenarioWorld run_world = world;
      FiniteTrace trace = ground(controller, run_world, cfg, cfg.seed + static_cast<std::uint64_t>(k));
      if (!eval_finite(phi, trace, 0)) {
        row.empirical_all = false;
        break;
      }
    }
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<ProbeRow> theorem1_probe(const TransitionSystem& model, const ControllerFsa& controller,
                                     const std::vector<std::pair<std::string, FormulaPtr>>& specs,
                                     const RunConfig& cfg) {
  return theorem1_probe(ScenarioWorld::from_model(model.name(), model), controller, specs, cfg);
}

}  // namespace specdrive
