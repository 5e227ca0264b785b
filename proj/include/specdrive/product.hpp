#pragma once

#include <optional>
#include <string>
#include <vector>

#include "specdrive/automata.hpp"
#include "specdrive/logic.hpp"

namespace specdrive {

// The edge label an output contributes beyond the model observations. A real
// output contributes itself. The no-op keeps the vehicle's standing behavior:
// it rolls on a green light and holds position otherwise, so the label shows
// go_straight or stop when those actions are in the controller's vocabulary,
// and nothing for controllers outside the driving domain.
NameSet effective_actions(const ControllerFsa& c, const NameSet& outputs, bool noop, const NameSet& sigma);

struct ProductState {
  int model_state = 0;
  int ctrl_state = 0;
  bool operator==(const ProductState& o) const {
    return model_state == o.model_state && ctrl_state == o.ctrl_state;
  }
  bool operator<(const ProductState& o) const {
    return model_state != o.model_state ? model_state < o.model_state : ctrl_state < o.ctrl_state;
  }
};

struct ProductEdge {
  int from = 0;
  int to = 0;
  std::vector<Letter> labels;  // one per witnessing output
};

class ProductAutomaton {
public:
  ProductAutomaton() = default;
  ProductAutomaton(std::vector<ProductState> states, std::vector<int> init_states,
                   std::vector<ProductEdge> edges, std::vector<std::string> model_names,
                   std::vector<std::string> ctrl_names);

  const std::vector<ProductState>& states() const { return states_; }
  const std::vector<int>& init_states() const { return init_; }
  const std::vector<ProductEdge>& edges() const { return edges_; }
  const std::vector<int>& out_edges(int state) const { return out_[state]; }
  std::string state_name(int idx) const;  // "(p0, q3)"
  const std::string& model_state_name(int idx) const { return model_names_[states_[idx].model_state]; }
  const std::string& ctrl_state_name(int idx) const { return ctrl_names_[states_[idx].ctrl_state]; }
  std::size_t size() const { return states_.size(); }

private:
  std::vector<ProductState> states_;
  std::vector<int> init_;
  std::vector<ProductEdge> edges_;
  std::vector<std::vector<int>> out_;
  std::vector<std::string> model_names_, ctrl_names_;
};

// Synchronous composition restricted to the states reachable from
// {(p, q_init) | p in S_model}. The controller must be input-enabled
// (complete_controller) and read only propositions the model declares.
ProductAutomaton build_product(const TransitionSystem& model, const ControllerFsa& controller);

struct LabeledTrajectory {
  std::vector<ProductState> state_seq;
  std::vector<Letter> label_seq;               // |label_seq| == |state_seq| - 1
  std::optional<std::size_t> lasso_start;      // cycle: state_seq.back() == state_seq[*lasso_start]
};

// Brute-force enumeration of labeled paths of up to max_len letters from the
// initial states. Desk-scale oracle; throws ExplosionGuard past the bound.
std::vector<LabeledTrajectory> enumerate_labeled_paths(const ProductAutomaton& prod, std::size_t max_len,
                                                       std::size_t guard_limit = 1000000);

std::string to_dot(const ProductAutomaton& prod);

// "(p0, q3, {green_traffic_light, go_straight})" step rendering
std::string format_trajectory(const ProductAutomaton& prod, const LabeledTrajectory& t);

}  // namespace specdrive
