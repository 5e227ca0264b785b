#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "specdrive/logic.hpp"

namespace specdrive {

struct ModelState {
  std::string name;
  NameSet label;
};

struct ModelEdge {
  int from = 0;
  int to = 0;
  std::string guard_text;  // documentation of when the environment takes the edge
};

// Nondeterministic environment model: states labeled with the propositions
// that hold there, plus an unguarded transition relation.
class TransitionSystem {
public:
  TransitionSystem() = default;
  TransitionSystem(std::string name, std::vector<std::string> props, std::vector<ModelState> states,
                   std::vector<ModelEdge> edges);

  const std::string& name() const { return name_; }
  const std::vector<std::string>& props() const { return props_; }
  const std::vector<ModelState>& states() const { return states_; }
  const std::vector<ModelEdge>& edges() const { return edges_; }
  const std::vector<int>& successors(int state) const { return succ_[state]; }
  bool has_transition(int from, int to) const;
  int state_index(const std::string& name) const;  // -1 when absent
  const NameSet& label(int state) const { return states_[state].label; }
  bool has_prop(const std::string& p) const { return prop_set_.count(p) > 0; }

private:
  std::string name_;
  std::vector<std::string> props_;
  NameSet prop_set_;
  std::vector<ModelState> states_;
  std::vector<ModelEdge> edges_;
  std::vector<std::vector<int>> succ_;
  std::map<std::string, int> index_;
};

// Answers whether the system allows a move between two label valuations.
struct TransitionPredicate {
  std::function<bool(const NameSet&, const NameSet&)> allows;

  static TransitionPredicate always();
  static TransitionPredicate from_pairs(const std::vector<std::pair<NameSet, NameSet>>& pairs);
};

// Enumerates one state per subset of `props`, keeps the transitions the
// predicate allows, and (optionally) prunes states with no incident
// transitions. Self-loops count as incident.
TransitionSystem build_model(const std::vector<std::string>& props, const TransitionPredicate& predicate,
                             bool prune, const std::string& name = "model");

struct NamedState {
  std::string name;
  NameSet label;
};

struct GuardedEdge {
  std::string from;
  std::string guard;  // boolean formula text over the model props
  std::string to;
};

TransitionSystem model_from_edges(const std::string& name, const std::vector<std::string>& props,
                                  const std::vector<NamedState>& states,
                                  const std::vector<GuardedEdge>& edges);

// --- controllers ------------------------------------------------------------

struct ControllerTransition {
  int from = 0;
  FormulaPtr guard;        // boolean over input props
  NameSet outputs;         // empty iff noop
  bool noop = false;       // the no-operation output symbol
  int to = 0;
};

class ControllerFsa {
public:
  ControllerFsa() = default;
  ControllerFsa(std::string name, std::vector<std::string> input_props,
                std::vector<std::string> output_props, std::vector<std::string> state_names, int init,
                std::vector<ControllerTransition> transitions);

  const std::string& name() const { return name_; }
  const std::vector<std::string>& input_props() const { return input_props_; }
  const std::vector<std::string>& output_props() const { return output_props_; }
  const std::vector<std::string>& state_names() const { return state_names_; }
  int init_state() const { return init_; }
  // declaration order is significant: grounding breaks ties by first match
  const std::vector<ControllerTransition>& transitions() const { return transitions_; }
  const std::vector<int>& transitions_from(int state) const { return by_state_[state]; }
  bool has_output(const std::string& a) const { return output_set_.count(a) > 0; }
  int state_index(const std::string& name) const;

private:
  std::string name_;
  std::vector<std::string> input_props_, output_props_;
  NameSet output_set_;
  std::vector<std::string> state_names_;
  int init_ = 0;
  std::vector<ControllerTransition> transitions_;
  std::vector<std::vector<int>> by_state_;
};

bool controllers_equal(const ControllerFsa& a, const ControllerFsa& b);

// Adds, per state, an "otherwise" no-op self-loop covering the inputs no
// explicit guard accepts. Idempotent; existing transitions are untouched.
ControllerFsa complete_controller(const ControllerFsa& c);

// Exhaustive input-enabledness check (2^|inputs| enumeration, capped at 20).
bool is_input_enabled(const ControllerFsa& c);

// --- step DSL ----------------------------------------------------------------

enum class StepKind { Observe, Conditional, Act };

enum class ElseBehavior { Wait, Goto };

struct Step {
  StepKind kind = StepKind::Observe;
  NameSet observe_props;            // Observe
  FormulaPtr condition;             // Conditional
  std::string action;               // Conditional/Act; empty means the no-op
  ElseBehavior else_behavior = ElseBehavior::Wait;
  int goto_step = 0;                // 1-based, when else_behavior == Goto
};

struct StepList {
  std::vector<Step> steps;
};

// Parses the numbered bracketed form, e.g.
//   1. <observe traffic light>.
//   2. <if> <green traffic light>, <go straight>.
StepList parse_steps(const std::string& text, const PropSet& props);

std::string print_steps(const StepList& steps);

// One controller state per step plus a terminal state with a no-op self-loop.
ControllerFsa steps_to_controller(const StepList& steps, const PropSet& props,
                                  const std::string& name = "controller");

}  // namespace specdrive
