#pragma once

// Shared helpers for the test suites: deterministic random generators for
// formulas, traces, models, controllers and raw product graphs, plus the
// brute-force lasso oracle the model checker is judged against.

#include <algorithm>
#include <string>
#include <vector>

#include "specdrive/automata.hpp"
#include "specdrive/logic.hpp"
#include "specdrive/modelcheck.hpp"
#include "specdrive/product.hpp"
#include "specdrive/rng.hpp"

#ifndef SPECDRIVE_ASSET_DIR
#define SPECDRIVE_ASSET_DIR "assets"
#endif

namespace testutil {

using namespace specdrive;

inline std::string asset(const std::string& rel) { return std::string(SPECDRIVE_ASSET_DIR) + "/" + rel; }

// --- random formulas --------------------------------------------------------

inline FormulaPtr random_formula(Rng& rng, int depth, const std::vector<std::string>& atoms,
                                 bool boolean_only = false) {
  if (depth <= 0 || rng.below(5) == 0) {
    const std::size_t k = rng.below(atoms.size() + 2);
    if (k == atoms.size()) return Formula::tt();
    if (k == atoms.size() + 1) return Formula::ff();
    return Formula::atom(atoms[k]);
  }
  const std::size_t op = rng.below(boolean_only ? 4 : 9);
  switch (op) {
    case 0: return Formula::not_(random_formula(rng, depth - 1, atoms, boolean_only));
    case 1:
      return Formula::and_(random_formula(rng, depth - 1, atoms, boolean_only),
                           random_formula(rng, depth - 1, atoms, boolean_only));
    case 2:
      return Formula::or_(random_formula(rng, depth - 1, atoms, boolean_only),
                          random_formula(rng, depth - 1, atoms, boolean_only));
    case 3:
      return Formula::implies(random_formula(rng, depth - 1, atoms, boolean_only),
                              random_formula(rng, depth - 1, atoms, boolean_only));
    case 4: return Formula::next(random_formula(rng, depth - 1, atoms, false));
    case 5:
      return Formula::until(random_formula(rng, depth - 1, atoms, false),
                            random_formula(rng, depth - 1, atoms, false));
    case 6: return Formula::eventually(random_formula(rng, depth - 1, atoms, false));
    default: return Formula::always(random_formula(rng, depth - 1, atoms, false));
  }
}

inline Letter random_letter(Rng& rng, const std::vector<std::string>& atoms) {
  Letter l;
  for (const auto& a : atoms)
    if (rng.below(2) == 0) l.insert(a);
  return l;
}

inline FiniteTrace random_trace(Rng& rng, const std::vector<std::string>& obs_atoms,
                                const std::vector<std::string>& act_atoms, std::size_t max_len) {
  FiniteTrace t;
  const std::size_t len = 1 + rng.below(max_len);
  for (std::size_t i = 0; i < len; ++i) {
    TraceStep s;
    s.observations = random_letter(rng, obs_atoms);
    s.actions = random_letter(rng, act_atoms);
    t.steps.push_back(std::move(s));
  }
  return t;
}

// --- random automata ----------------------------------------------------------

// sparse nonblocking model over the given props
inline TransitionSystem random_model(Rng& rng, std::size_t n_states, const std::vector<std::string>& props) {
  std::vector<NamedState> states;
  for (std::size_t i = 0; i < n_states; ++i)
    states.push_back(NamedState{"p" + std::to_string(i), random_letter(rng, props)});
  std::vector<GuardedEdge> edges;
  for (std::size_t i = 0; i < n_states; ++i) {
    const std::size_t fanout = 1 + rng.below(2);
    for (std::size_t k = 0; k < fanout; ++k)
      edges.push_back(GuardedEdge{"p" + std::to_string(i), "true",
                                  "p" + std::to_string(rng.below(n_states))});
  }
  return model_from_edges("random", props, states, edges);
}

// random step list over the vocabulary; conditions are or-of-and literal
// shapes so the printed form reparses to the same tree
inline StepList random_steps(Rng& rng, const PropSet& props, std::size_t max_steps) {
  StepList sl;
  const std::size_t n = 1 + rng.below(max_steps);
  for (std::size_t i = 0; i < n; ++i) {
    Step s;
    switch (rng.below(3)) {
      case 0: {
        s.kind = StepKind::Observe;
        s.observe_props.insert(props.env()[rng.below(props.env().size())]);
        if (rng.below(3) == 0) s.observe_props.insert(props.env()[rng.below(props.env().size())]);
        break;
      }
      case 1: {
        s.kind = StepKind::Conditional;
        auto literal = [&]() {
          FormulaPtr a = Formula::atom(props.env()[rng.below(props.env().size())]);
          return rng.below(2) == 0 ? Formula::not_(a) : a;
        };
        FormulaPtr cond = literal();
        if (rng.below(2) == 0) cond = Formula::and_(cond, literal());
        if (rng.below(3) == 0) cond = Formula::or_(cond, literal());
        s.condition = cond;
        if (rng.below(2) == 0) s.action = props.actions()[rng.below(props.actions().size())];
        break;
      }
      default: {
        s.kind = StepKind::Act;
        s.action = props.actions()[rng.below(props.actions().size())];
        break;
      }
    }
    sl.steps.push_back(std::move(s));
  }
  return sl;
}

inline ControllerFsa random_controller(Rng& rng, const PropSet& props, std::size_t max_steps) {
  return complete_controller(steps_to_controller(random_steps(rng, props, max_steps), props, "random"));
}

// raw product graph: sparse, every state has a successor, letters over atoms
inline ProductAutomaton random_product(Rng& rng, std::size_t n_states,
                                       const std::vector<std::string>& atoms) {
  std::vector<ProductState> states;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n_states; ++i) {
    states.push_back(ProductState{static_cast<int>(i), 0});
    names.push_back("s" + std::to_string(i));
  }
  std::vector<ProductEdge> edges;
  for (std::size_t i = 0; i < n_states; ++i) {
    const std::size_t fanout = 1 + rng.below(2);
    for (std::size_t k = 0; k < fanout; ++k) {
      ProductEdge e;
      e.from = static_cast<int>(i);
      e.to = static_cast<int>(rng.below(n_states));
      e.labels.push_back(random_letter(rng, atoms));
      if (rng.below(4) == 0) {
        Letter extra = random_letter(rng, atoms);
        if (extra != e.labels[0]) e.labels.push_back(extra);
      }
      edges.push_back(std::move(e));
    }
  }
  std::vector<int> inits;
  inits.push_back(static_cast<int>(rng.below(n_states)));
  if (rng.below(2) == 0) inits.push_back(static_cast<int>(rng.below(n_states)));
  std::sort(inits.begin(), inits.end());
  inits.erase(std::unique(inits.begin(), inits.end()), inits.end());
  return ProductAutomaton(states, inits, edges, names, {"q0"});
}

// --- brute-force oracle ---------------------------------------------------------

// Enumerates every lasso reachable from the initial states with
// stem+cycle <= max_len and evaluates phi on the induced periodic word.
// Returns true when every enumerated lasso satisfies phi.
inline bool brute_force_holds(const ProductAutomaton& prod, const FormulaPtr& phi,
                              std::size_t max_len = 16) {
  struct Walker {
    const ProductAutomaton& prod;
    const FormulaPtr& phi;
    std::size_t max_len;
    std::vector<int> path_states;
    std::vector<Letter> path_letters;
    bool violated = false;

    void dfs(int state) {
      if (violated) return;
      if (path_letters.size() >= max_len) return;
      for (int ei : prod.out_edges(state)) {
        const ProductEdge& e = prod.edges()[ei];
        for (const Letter& l : e.labels) {
          // does this edge close a cycle?
          for (std::size_t i = 0; i < path_states.size(); ++i) {
            if (path_states[i] == e.to) {
              std::vector<Letter> word = path_letters;
              word.push_back(l);
              if (!eval_lasso(phi, word, i)) {
                violated = true;
                return;
              }
            }
          }
          path_states.push_back(e.to);
          path_letters.push_back(l);
          dfs(e.to);
          path_states.pop_back();
          path_letters.pop_back();
          if (violated) return;
        }
      }
    }
  };

  Walker w{prod, phi, max_len, {}, {}, false};
  for (int init : prod.init_states()) {
    w.path_states = {init};
    w.path_letters = {};
    w.dfs(init);
    if (w.violated) return false;
  }
  return true;
}

// Does the Buchi automaton accept the ultimately periodic word
// letters[0..] (letters[lasso_start..])^omega? Independent acceptance
// search used to validate the tableau construction.
inline bool nba_accepts_lasso(const BuchiAutomaton& nba, const std::vector<Letter>& letters,
                              std::size_t lasso_start) {
  const std::size_t n = letters.size();
  auto succ_pos = [&](std::size_t i) { return i + 1 < n ? i + 1 : lasso_start; };
  auto letter_ok = [&](int b, std::size_t pos) {
    for (const auto& a : nba.states[b].pos)
      if (!letters[pos].count(a)) return false;
    for (const auto& a : nba.states[b].neg)
      if (letters[pos].count(a)) return false;
    return true;
  };
  // configuration graph over (word position, nba state); accepted iff a cycle
  // through an accepting configuration is reachable
  const std::size_t total = n * nba.size();
  std::vector<char> reach(total, 0);
  std::vector<std::pair<std::size_t, int>> stack;
  for (int b : nba.inits) {
    if (!letter_ok(b, 0)) continue;
    const std::size_t id = 0 * nba.size() + static_cast<std::size_t>(b);
    if (!reach[id]) {
      reach[id] = 1;
      stack.emplace_back(0, b);
    }
  }
  while (!stack.empty()) {
    auto [pos, b] = stack.back();
    stack.pop_back();
    for (int b2 : nba.succ[b]) {
      const std::size_t p2 = succ_pos(pos);
      if (!letter_ok(b2, p2)) continue;
      const std::size_t id = p2 * nba.size() + static_cast<std::size_t>(b2);
      if (!reach[id]) {
        reach[id] = 1;
        stack.emplace_back(p2, b2);
      }
    }
  }
  // cycle detection restricted to reached accepting configurations
  for (std::size_t pos = lasso_start; pos < n; ++pos) {
    for (std::size_t b = 0; b < nba.size(); ++b) {
      if (!nba.states[b].accepting) continue;
      const std::size_t id = pos * nba.size() + b;
      if (!reach[id]) continue;
      // BFS from the accepting configuration looking for a path back to it
      std::vector<char> seen(total, 0);
      std::vector<std::pair<std::size_t, int>> work{{pos, static_cast<int>(b)}};
      while (!work.empty()) {
        auto [p, s] = work.back();
        work.pop_back();
        for (int s2 : nba.succ[s]) {
          const std::size_t p2 = succ_pos(p);
          if (!letter_ok(s2, p2)) continue;
          if (p2 == pos && s2 == static_cast<int>(b)) return true;
          const std::size_t id2 = p2 * nba.size() + static_cast<std::size_t>(s2);
          if (!seen[id2]) {
            seen[id2] = 1;
            work.emplace_back(p2, s2);
          }
        }
      }
    }
  }
  return false;
}

}  // namespace testutil
