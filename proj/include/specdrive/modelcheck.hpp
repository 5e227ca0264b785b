#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "specdrive/product.hpp"

namespace specdrive {

struct BuchiState {
  NameSet pos, neg;  // literal constraints the letter at this state must satisfy
  bool accepting = false;
};

// Nondeterministic Buchi automaton over letters from 2^(P u P_A). A run
// b0 b1 ... reads w0 w1 ... when every wi satisfies bi's literals and
// consecutive states are connected; acceptance is the usual infinitely-often
// visit condition.
class BuchiAutomaton {
public:
  std::vector<BuchiState> states;
  std::vector<std::vector<int>> succ;
  std::vector<int> inits;
  std::size_t size() const { return states.size(); }
};

// Tableau construction; accepts any formula (desugars internally).
BuchiAutomaton ltl_to_buchi(const FormulaPtr& phi, std::size_t max_nodes = 50000);

struct Verdict {
  std::string spec_name;
  bool holds = false;
  std::optional<LabeledTrajectory> counterexample;
};

struct VerificationReport {
  std::string controller_id;
  std::vector<Verdict> verdicts;
  int satisfied_count = 0;
  int total = 0;
};

// Emptiness of product x Buchi(!phi) by nested depth-first search. The first
// accepting lasso found becomes the counterexample; no minimality guarantee.
Verdict check(const ProductAutomaton& prod, const std::string& spec_name, const FormulaPtr& phi);

VerificationReport check_all(const ProductAutomaton& prod,
                             const std::vector<std::pair<std::string, FormulaPtr>>& specs,
                             const std::string& controller_id);

// NuSMV module equivalent to the product's labeled trajectories, one LTLSPEC
// per named formula.
std::string export_smv(const TransitionSystem& model, const ControllerFsa& controller,
                       const std::vector<std::pair<std::string, FormulaPtr>>& specs);

}  // namespace specdrive
