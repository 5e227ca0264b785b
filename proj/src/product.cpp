#include "specdrive/product.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>

namespace specdrive {

NameSet effective_actions(const ControllerFsa& c, const NameSet& outputs, bool noop, const NameSet& sigma) {
  if (!noop) return outputs;
  if (c.has_output("go_straight") && sigma.count("green_traffic_light")) return {"go_straight"};
  if (c.has_output("stop")) return {"stop"};
  return {};
}

ProductAutomaton::ProductAutomaton(std::vector<ProductState> states, std::vector<int> init_states,
                                   std::vector<ProductEdge> edges, std::vector<std::string> model_names,
                                   std::vector<std::string> ctrl_names)
    : states_(std::move(states)),
      init_(std::move(init_states)),
      edges_(std::move(edges)),
      model_names_(std::move(model_names)),
      ctrl_names_(std::move(ctrl_names)) {
  out_.resize(states_.size());
  for (std::size_t i = 0; i < edges_.size(); ++i) out_[edges_[i].from].push_back(static_cast<int>(i));
}

std::string ProductAutomaton::state_name(int idx) const {
  return "(" + model_state_name(idx) + ", " + ctrl_state_name(idx) + ")";
}

ProductAutomaton build_product(const TransitionSystem& model, const ControllerFsa& controller) {
  for (const auto& p : controller.input_props())
    if (!model.has_prop(p))
      throw PropMismatchError("controller reads proposition '" + p + "' the model does not declare");
  if (controller.input_props().size() <= 16 && !is_input_enabled(controller))
    throw ValidationError("controller is not input-enabled; run complete_controller first");

  NameSet input_set(controller.input_props().begin(), controller.input_props().end());

  std::map<ProductState, int> index;
  std::vector<ProductState> states;
  std::vector<int> inits;
  std::deque<int> work;

  auto intern = [&](ProductState s) {
    auto it = index.find(s);
    if (it != index.end()) return it->second;
    const int id = static_cast<int>(states.size());
    index.emplace(s, id);
    states.push_back(s);
    work.push_back(id);
    return id;
  };

  for (int p = 0; p < static_cast<int>(model.states().size()); ++p)
    inits.push_back(intern(ProductState{p, controller.init_state()}));

  std::map<std::pair<int, int>, std::vector<Letter>> edge_labels;
  while (!work.empty()) {
    const int id = work.front();
    work.pop_front();
    const ProductState s = states[id];
    const NameSet& sigma = model.label(s.model_state);
    Letter sigma_in;
    for (const auto& a : sigma)
      if (input_set.count(a)) sigma_in.insert(a);

    for (int ti : controller.transitions_from(s.ctrl_state)) {
      const ControllerTransition& t = controller.transitions()[ti];
      if (!eval_letter_bool(t.guard, sigma_in)) continue;
      Letter label = sigma;
      const NameSet acts = effective_actions(controller, t.outputs, t.noop, sigma);
      label.insert(acts.begin(), acts.end());
      for (int p2 : model.successors(s.model_state)) {
        const int to = intern(ProductState{p2, t.to});
        auto& labels = edge_labels[{id, to}];
        if (std::find(labels.begin(), labels.end(), label) == labels.end()) labels.push_back(label);
      }
    }
  }

  std::vector<ProductEdge> edges;
  edges.reserve(edge_labels.size());
  for (auto& [key, labels] : edge_labels)
    edges.push_back(ProductEdge{key.first, key.second, std::move(labels)});

  std::vector<std::string> model_names, ctrl_names;
  for (const auto& ms : model.states()) model_names.push_back(ms.name);
  ctrl_names = controller.state_names();
  return ProductAutomaton(std::move(states), std::move(inits), std::move(edges), std::move(model_names),
                          std::move(ctrl_names));
}

std::vector<LabeledTrajectory> enumerate_labeled_paths(const ProductAutomaton& prod, std::size_t max_len,
                                                       std::size_t guard_limit) {
  if (max_len < 1) throw ValidationError("max_len must be >= 1");
  std::vector<LabeledTrajectory> out;
  std::size_t visited = 0;

  struct Frame {
    LabeledTrajectory t;
  };
  std::deque<Frame> work;
  for (int init : prod.init_states()) {
    Frame f;
    f.t.state_seq.push_back(prod.states()[init]);
    work.push_back(std::move(f));
  }

  std::map<ProductState, int> index;
  for (std::size_t i = 0; i < prod.states().size(); ++i) index[prod.states()[i]] = static_cast<int>(i);

  while (!work.empty()) {
    Frame f = std::move(work.front());
    work.pop_front();
    if (++visited > guard_limit) throw ExplosionGuardError(guard_limit);
    if (!f.t.label_seq.empty()) out.push_back(f.t);
    if (f.t.label_seq.size() >= max_len) continue;
    const int at = index.at(f.t.state_seq.back());
    for (int ei : prod.out_edges(at)) {
      const ProductEdge& e = prod.edges()[ei];
      for (const Letter& label : e.labels) {
        Frame next = f;
        next.t.state_seq.push_back(prod.states()[e.to]);
        next.t.label_seq.push_back(label);
        work.push_back(std::move(next));
      }
    }
  }
  return out;
}

std::string to_dot(const ProductAutomaton& prod) {
  std::ostringstream out;
  out << "digraph product {\n  rankdir=LR;\n";
  NameSet init_set;
  for (int i : prod.init_states()) init_set.insert(prod.state_name(i));
  for (std::size_t i = 0; i < prod.states().size(); ++i) {
    out << "  n" << i << " [label=\"" << prod.state_name(static_cast<int>(i)) << "\"";
    if (init_set.count(prod.state_name(static_cast<int>(i)))) out << ", shape=doublecircle";
    out << "];\n";
  }
  for (const auto& e : prod.edges()) {
    out << "  n" << e.from << " -> n" << e.to << " [label=\"";
    bool first_label = true;
    for (const auto& label : e.labels) {
      if (!first_label) out << " / ";
      first_label = false;
      out << "{";
      bool first = true;
      for (const auto& a : label) {
        if (!first) out << ",";
        first = false;
        out << a;
      }
      out << "}";
    }
    out << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

std::string format_letter(const Letter& label) {
  std::string out = "{";
  bool first = true;
  for (const auto& a : label) {
    if (!first) out += ", ";
    first = false;
    out += a;
  }
  return out + "}";
}

std::string format_trajectory(const ProductAutomaton& prod, const LabeledTrajectory& t) {
  std::map<ProductState, int> index;
  for (std::size_t i = 0; i < prod.states().size(); ++i) index[prod.states()[i]] = static_cast<int>(i);
  std::ostringstream out;
  for (std::size_t i = 0; i + 1 < t.state_seq.size(); ++i) {
    if (t.lasso_start && *t.lasso_start == i) out << "[cycle] ";
    const int id = index.at(t.state_seq[i]);
    out << "(" << prod.model_state_name(id) << ", " << prod.ctrl_state_name(id) << ", "
        << format_letter(t.label_seq[i]) << ")";
    if (i + 2 < t.state_seq.size()) out << " ";
  }
  return out.str();
}

}  // namespace specdrive
