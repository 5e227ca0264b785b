#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "specdrive/errors.hpp"

namespace specdrive {

using NameSet = std::set<std::string>;

enum class PropKind { environment, action };

struct Proposition {
  std::string name;
  PropKind kind;
};

// The declared proposition universe. Environment names (P) and action names
// (P_A) are disjoint; every name matches [a-z][a-z0-9_]*.
class PropSet {
public:
  PropSet() = default;
  static PropSet make(std::vector<std::string> env, std::vector<std::string> action);

  bool is_env(const std::string& name) const { return env_set_.count(name) > 0; }
  bool is_action(const std::string& name) const { return action_set_.count(name) > 0; }
  bool contains(const std::string& name) const { return is_env(name) || is_action(name); }

  const std::vector<std::string>& env() const { return env_; }
  const std::vector<std::string>& actions() const { return action_; }

  static bool valid_name(const std::string& name);

private:
  std::vector<std::string> env_, action_;
  NameSet env_set_, action_set_;
};

enum class Op {
  Atom,
  True,
  False,
  Not,
  And,
  Or,
  Implies,
  Next,
  Until,
  Eventually,
  Always,
  Release,  // internal; produced only by negation normal form
};

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

class Formula {
public:
  Op op;
  std::string atom_name;  // Op::Atom only
  FormulaPtr lhs, rhs;    // rhs set for binary ops only

  static FormulaPtr atom(std::string name);
  static FormulaPtr tt();
  static FormulaPtr ff();
  static FormulaPtr not_(FormulaPtr f);
  static FormulaPtr and_(FormulaPtr a, FormulaPtr b);
  static FormulaPtr or_(FormulaPtr a, FormulaPtr b);
  static FormulaPtr implies(FormulaPtr a, FormulaPtr b);
  static FormulaPtr next(FormulaPtr f);
  static FormulaPtr until(FormulaPtr a, FormulaPtr b);
  static FormulaPtr release(FormulaPtr a, FormulaPtr b);
  static FormulaPtr eventually(FormulaPtr f);
  static FormulaPtr always(FormulaPtr f);
};

bool structurally_equal(const FormulaPtr& a, const FormulaPtr& b);

// Parses the ASCII concrete syntax. Precedence: unary (!, X, F, G) binds
// tightest, then U (right-assoc), & , |, -> (right-assoc). Atoms must be
// declared in `props`.
FormulaPtr parse_ltl(const std::string& text, const PropSet& props);

// Parse without a declared universe (atoms unchecked). Used for guard
// parsing where the caller validates against its own prop list.
FormulaPtr parse_ltl_unchecked(const std::string& text);

std::string print_ltl(const FormulaPtr& f, bool full_parens = false);

// Rewrites to the core {Atom, True, Not, Or, Next, Until}.
FormulaPtr desugar(const FormulaPtr& f);

void collect_atoms(const FormulaPtr& f, NameSet& out);
NameSet atoms_of(const FormulaPtr& f);

// True when the formula has no temporal operator (usable as a guard).
bool is_boolean(const FormulaPtr& f);

// --- traces ---------------------------------------------------------------

struct TraceStep {
  NameSet observations;
  NameSet actions;
  NameSet letter() const;
};

struct FiniteTrace {
  std::vector<TraceStep> steps;
  std::size_t size() const { return steps.size(); }
};

using Letter = NameSet;

// Finite-trace (LTLf) evaluation; X is strong (false at the last step).
bool eval_finite(const FormulaPtr& f, const FiniteTrace& trace, std::size_t position);

// A boolean formula evaluated against one letter.
bool eval_letter_bool(const FormulaPtr& f, const Letter& letter);

// Exact evaluation on the ultimately periodic word
//   letters[0] .. letters[lasso_start-1] (letters[lasso_start] ..)^omega
// under standard infinite-trace semantics.
bool eval_lasso(const FormulaPtr& f, const std::vector<Letter>& letters, std::size_t lasso_start);

}  // namespace specdrive
