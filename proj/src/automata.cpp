#include "specdrive/automata.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "specdrive/canonical.hpp"

namespace specdrive {

TransitionSystem::TransitionSystem(std::string name, std::vector<std::string> props,
                                   std::vector<ModelState> states, std::vector<ModelEdge> edges)
    : name_(std::move(name)), props_(std::move(props)), states_(std::move(states)), edges_(std::move(edges)) {
  for (const auto& p : props_) {
    if (!PropSet::valid_name(p)) throw ValidationError("bad proposition name '" + p + "'");
    prop_set_.insert(p);
  }
  succ_.resize(states_.size());
  for (std::size_t i = 0; i < states_.size(); ++i) {
    const auto& s = states_[i];
    if (!index_.emplace(s.name, static_cast<int>(i)).second) throw DuplicateStateError(s.name);
    for (const auto& p : s.label)
      if (!prop_set_.count(p))
        throw UnknownPropositionError(p);
  }
  for (const auto& e : edges_) {
    if (e.from < 0 || e.from >= static_cast<int>(states_.size()) || e.to < 0 ||
        e.to >= static_cast<int>(states_.size()))
      throw ValidationError("edge endpoint out of range");
    succ_[e.from].push_back(e.to);
  }
  for (auto& v : succ_) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
}

bool TransitionSystem::has_transition(int from, int to) const {
  const auto& v = succ_[from];
  return std::binary_search(v.begin(), v.end(), to);
}

int TransitionSystem::state_index(const std::string& name) const {
  auto it = index_.find(name);
  return it == index_.end() ? -1 : it->second;
}

TransitionPredicate TransitionPredicate::always() {
  return TransitionPredicate{[](const NameSet&, const NameSet&) { return true; }};
}

TransitionPredicate TransitionPredicate::from_pairs(const std::vector<std::pair<NameSet, NameSet>>& pairs) {
  auto table = std::make_shared<std::vector<std::pair<NameSet, NameSet>>>(pairs);
  return TransitionPredicate{[table](const NameSet& a, const NameSet& b) {
    for (const auto& [from, to] : *table)
      if (from == a && to == b) return true;
    return false;
  }};
}

TransitionSystem build_model(const std::vector<std::string>& props, const TransitionPredicate& predicate,
                             bool prune, const std::string& name) {
  if (props.size() > 20) throw TooManyPropsError(props.size());
  const std::size_t n = props.size();
  const std::size_t count = std::size_t{1} << n;

  std::vector<ModelState> states(count);
  for (std::size_t mask = 0; mask < count; ++mask) {
    NameSet label;
    for (std::size_t b = 0; b < n; ++b)
      if (mask & (std::size_t{1} << b)) label.insert(props[b]);
    states[mask] = ModelState{"s" + std::to_string(mask), std::move(label)};
  }

  std::vector<ModelEdge> edges;
  std::vector<char> incident(count, 0);
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = 0; j < count; ++j) {
      if (!predicate.allows(states[i].label, states[j].label)) continue;
      edges.push_back(ModelEdge{static_cast<int>(i), static_cast<int>(j), ""});
      incident[i] = incident[j] = 1;
    }
  }

  if (!prune) return TransitionSystem(name, props, states, edges);

  // keep only states with at least one incoming or outgoing transition
  std::vector<int> remap(count, -1);
  std::vector<ModelState> kept;
  for (std::size_t i = 0; i < count; ++i) {
    if (!incident[i]) continue;
    remap[i] = static_cast<int>(kept.size());
    kept.push_back(states[i]);
  }
  std::vector<ModelEdge> kept_edges;
  for (const auto& e : edges)
    kept_edges.push_back(ModelEdge{remap[e.from], remap[e.to], e.guard_text});
  return TransitionSystem(name, props, kept, kept_edges);
}

TransitionSystem model_from_edges(const std::string& name, const std::vector<std::string>& props,
                                  const std::vector<NamedState>& states,
                                  const std::vector<GuardedEdge>& edges) {
  NameSet prop_set(props.begin(), props.end());
  std::map<std::string, int> index;
  std::vector<ModelState> ms;
  for (const auto& s : states) {
    if (index.count(s.name)) throw DuplicateStateError(s.name);
    index.emplace(s.name, static_cast<int>(ms.size()));
    ms.push_back(ModelState{s.name, s.label});
  }
  std::vector<ModelEdge> me;
  for (const auto& e : edges) {
    auto fi = index.find(e.from);
    auto ti = index.find(e.to);
    if (fi == index.end()) throw ValidationError("edge from unknown state '" + e.from + "'");
    if (ti == index.end()) throw ValidationError("edge to unknown state '" + e.to + "'");
    if (!e.guard.empty()) {
      FormulaPtr g = parse_ltl_unchecked(e.guard);
      if (!is_boolean(g)) throw ValidationError("temporal operator in edge guard: " + e.guard);
      for (const auto& a : atoms_of(g))
        if (!prop_set.count(a)) throw UnknownPropositionError(a);
    }
    me.push_back(ModelEdge{fi->second, ti->second, e.guard});
  }
  return TransitionSystem(name, props, ms, me);
}

// --- controllers ------------------------------------------------------------

ControllerFsa::ControllerFsa(std::string name, std::vector<std::string> input_props,
                             std::vector<std::string> output_props, std::vector<std::string> state_names,
                             int init, std::vector<ControllerTransition> transitions)
    : name_(std::move(name)),
      input_props_(std::move(input_props)),
      output_props_(std::move(output_props)),
      state_names_(std::move(state_names)),
      init_(init),
      transitions_(std::move(transitions)) {
  if (state_names_.empty()) throw ValidationError("controller needs at least one state");
  if (init_ < 0 || init_ >= static_cast<int>(state_names_.size()))
    throw ValidationError("controller initial state out of range");
  output_set_ = NameSet(output_props_.begin(), output_props_.end());
  NameSet inputs(input_props_.begin(), input_props_.end());
  by_state_.resize(state_names_.size());
  for (std::size_t i = 0; i < transitions_.size(); ++i) {
    const auto& t = transitions_[i];
    if (t.from < 0 || t.from >= static_cast<int>(state_names_.size()) || t.to < 0 ||
        t.to >= static_cast<int>(state_names_.size()))
      throw ValidationError("controller transition endpoint out of range");
    if (!t.guard) throw ValidationError("controller transition lacks a guard");
    if (!is_boolean(t.guard))
      throw ValidationError("temporal operator in controller guard: " + print_ltl(t.guard));
    for (const auto& a : atoms_of(t.guard))
      if (!inputs.count(a)) throw UnknownPropositionError(a);
    for (const auto& o : t.outputs)
      if (!output_set_.count(o)) throw UnknownPropositionError(o);
    if (t.noop && !t.outputs.empty())
      throw ValidationError("no-op transition with explicit outputs");
    if (!t.noop && t.outputs.empty())
      throw ValidationError("transition with empty output set; use the no-op symbol");
    by_state_[t.from].push_back(static_cast<int>(i));
  }
}

int ControllerFsa::state_index(const std::string& name) const {
  for (std::size_t i = 0; i < state_names_.size(); ++i)
    if (state_names_[i] == name) return static_cast<int>(i);
  return -1;
}

bool controllers_equal(const ControllerFsa& a, const ControllerFsa& b) {
  if (a.input_props() != b.input_props() || a.output_props() != b.output_props()) return false;
  if (a.state_names() != b.state_names() || a.init_state() != b.init_state()) return false;
  const auto& ta = a.transitions();
  const auto& tb = b.transitions();
  if (ta.size() != tb.size()) return false;
  for (std::size_t i = 0; i < ta.size(); ++i) {
    if (ta[i].from != tb[i].from || ta[i].to != tb[i].to || ta[i].noop != tb[i].noop ||
        ta[i].outputs != tb[i].outputs || !structurally_equal(ta[i].guard, tb[i].guard))
      return false;
  }
  return true;
}

namespace {

// Enumerates assignments over the controller's input props; returns the
// subsets of inputs with no enabled transition at `state`.
std::vector<Letter> uncovered_inputs(const ControllerFsa& c, int state) {
  const auto& inputs = c.input_props();
  if (inputs.size() > 20) throw TooManyPropsError(inputs.size());
  std::vector<Letter> missing;
  const std::size_t count = std::size_t{1} << inputs.size();
  for (std::size_t mask = 0; mask < count; ++mask) {
    Letter sigma;
    for (std::size_t b = 0; b < inputs.size(); ++b)
      if (mask & (std::size_t{1} << b)) sigma.insert(inputs[b]);
    bool covered = false;
    for (int ti : c.transitions_from(state)) {
      if (eval_letter_bool(c.transitions()[ti].guard, sigma)) {
        covered = true;
        break;
      }
    }
    if (!covered) missing.push_back(std::move(sigma));
  }
  return missing;
}

}  // namespace

ControllerFsa complete_controller(const ControllerFsa& c) {
  std::vector<ControllerTransition> transitions = c.transitions();
  bool changed = false;
  for (int q = 0; q < static_cast<int>(c.state_names().size()); ++q) {
    if (uncovered_inputs(c, q).empty()) continue;
    // "otherwise": the complement of the disjunction of the existing guards
    FormulaPtr any;
    for (int ti : c.transitions_from(q)) {
      const FormulaPtr& g = c.transitions()[ti].guard;
      any = any ? Formula::or_(any, g) : g;
    }
    FormulaPtr guard = any ? Formula::not_(any) : Formula::tt();
    transitions.push_back(ControllerTransition{q, guard, {}, true, q});
    changed = true;
  }
  if (!changed) return c;
  return ControllerFsa(c.name(), c.input_props(), c.output_props(), c.state_names(), c.init_state(),
                       std::move(transitions));
}

bool is_input_enabled(const ControllerFsa& c) {
  for (int q = 0; q < static_cast<int>(c.state_names().size()); ++q)
    if (!uncovered_inputs(c, q).empty()) return false;
  return true;
}

// --- step DSL ----------------------------------------------------------------

namespace {

struct Bracketed {
  std::string text;
};

// pulls the <...> groups off a step line; anything outside brackets other
// than commas/periods/whitespace is an error
std::vector<Bracketed> bracket_groups(const std::string& line, int lineno) {
  std::vector<Bracketed> out;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (std::isspace(static_cast<unsigned char>(c)) || c == ',' || c == '.') {
      ++i;
      continue;
    }
    if (c != '<') throw StepSyntaxError(lineno, std::string("unexpected '") + c + "' outside <...>");
    const std::size_t close = line.find('>', i + 1);
    if (close == std::string::npos) throw StepSyntaxError(lineno, "unterminated '<'");
    out.push_back(Bracketed{line.substr(i + 1, close - i - 1)});
    i = close + 1;
  }
  return out;
}

std::string trimmed(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool starts_with_word(const std::string& s, const std::string& w) {
  if (s.size() < w.size()) return false;
  if (s.compare(0, w.size(), w) != 0) return false;
  return s.size() == w.size() || s[w.size()] == ' ';
}

std::string resolve_prop(const std::string& phrase, const PropSet& props, int lineno) {
  auto name = phrase_to_name(phrase);
  if (!name) throw StepSyntaxError(lineno, "cannot read phrase '" + phrase + "'");
  if (!props.contains(*name)) throw UnknownPropositionError(*name, lineno);
  return *name;
}

// condition grammar: phrases joined with "and"/"or"; "no"/"not" negates a
// phrase; "and" binds tighter than "or"
FormulaPtr parse_condition(const std::string& text, const PropSet& props, int lineno) {
  auto split = [](const std::string& s, const std::string& sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
      std::size_t at = s.find(" " + sep + " ", start);
      if (at == std::string::npos) {
        parts.push_back(s.substr(start));
        break;
      }
      parts.push_back(s.substr(start, at - start));
      start = at + sep.size() + 2;
    }
    return parts;
  };
  FormulaPtr disj;
  for (const auto& or_part : split(trimmed(text), "or")) {
    FormulaPtr conj;
    for (const auto& and_part : split(trimmed(or_part), "and")) {
      std::string phrase = trimmed(and_part);
      bool negated = false;
      if (starts_with_word(phrase, "no")) {
        negated = true;
        phrase = trimmed(phrase.substr(2));
      } else if (starts_with_word(phrase, "not")) {
        negated = true;
        phrase = trimmed(phrase.substr(3));
      }
      if (phrase.empty()) throw StepSyntaxError(lineno, "empty condition phrase");
      const std::string prop = resolve_prop(phrase, props, lineno);
      if (!props.is_env(prop))
        throw StepSyntaxError(lineno, "condition references the action '" + prop + "'");
      FormulaPtr atom = Formula::atom(prop);
      if (negated) atom = Formula::not_(atom);
      conj = conj ? Formula::and_(conj, atom) : atom;
    }
    disj = disj ? Formula::or_(disj, conj) : conj;
  }
  if (!disj) throw StepSyntaxError(lineno, "empty condition");
  return disj;
}

// An action slot holds one of: a real action, a sensing phrase (observe/check,
// a no-op), or a filler word like "proceed"/"wait" (also a no-op).
std::string parse_action_slot(const std::string& text, const PropSet& props, int lineno) {
  std::string t = trimmed(text);
  if (t == "proceed" || t == "continue" || t == "wait") return "";
  if (starts_with_word(t, "observe") || starts_with_word(t, "check")) {
    // sensing: validate the mentioned propositions, emit nothing
    std::string rest = trimmed(t.substr(t.find(' ') == std::string::npos ? t.size() : t.find(' ')));
    if (!rest.empty()) {
      std::size_t start = 0;
      while (true) {
        std::size_t at = rest.find(" and ", start);
        std::string part = at == std::string::npos ? rest.substr(start) : rest.substr(start, at - start);
        resolve_prop(trimmed(part), props, lineno);
        if (at == std::string::npos) break;
        start = at + 5;
      }
    }
    return "";
  }
  const std::string name = resolve_prop(t, props, lineno);
  if (!props.is_action(name))
    throw StepSyntaxError(lineno, "'" + t + "' is not an action");
  return name;
}

}  // namespace

StepList parse_steps(const std::string& text, const PropSet& props) {
  StepList out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  int expected_index = 1;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trimmed(line);
    if (t.empty() || t[0] == '#') continue;
    std::size_t dot = t.find('.');
    if (dot == std::string::npos || dot == 0)
      throw StepSyntaxError(lineno, "expected 'N. <...>'");
    const std::string num = t.substr(0, dot);
    for (char c : num)
      if (!std::isdigit(static_cast<unsigned char>(c)))
        throw StepSyntaxError(lineno, "bad step number '" + num + "'");
    if (std::stoi(num) != expected_index)
      throw StepSyntaxError(lineno, "expected step " + std::to_string(expected_index));
    ++expected_index;

    auto groups = bracket_groups(t.substr(dot + 1), lineno);
    if (groups.empty()) throw StepSyntaxError(lineno, "no <...> groups");

    Step step;
    const std::string head = trimmed(groups[0].text);
    if (head == "if") {
      if (groups.size() < 3) throw StepSyntaxError(lineno, "<if> needs a condition and an action");
      step.kind = StepKind::Conditional;
      step.condition = parse_condition(groups[1].text, props, lineno);
      step.action = parse_action_slot(groups[2].text, props, lineno);
      if (groups.size() >= 4) {
        std::string e = trimmed(groups[3].text);
        if (e == "else wait") {
          step.else_behavior = ElseBehavior::Wait;
        } else if (starts_with_word(e, "else goto")) {
          step.else_behavior = ElseBehavior::Goto;
          step.goto_step = std::stoi(trimmed(e.substr(9)));
        } else {
          throw StepSyntaxError(lineno, "unknown trailer '<" + e + ">'");
        }
      }
      if (groups.size() > 4) throw StepSyntaxError(lineno, "too many <...> groups");
    } else if (starts_with_word(head, "observe") || starts_with_word(head, "check")) {
      if (groups.size() != 1) throw StepSyntaxError(lineno, "too many <...> groups");
      step.kind = StepKind::Observe;
      std::size_t sp = head.find(' ');
      std::string rest = sp == std::string::npos ? "" : trimmed(head.substr(sp));
      if (rest.empty()) throw StepSyntaxError(lineno, "nothing to observe");
      std::size_t start = 0;
      while (true) {
        std::size_t at = rest.find(" and ", start);
        std::string part = at == std::string::npos ? rest.substr(start) : rest.substr(start, at - start);
        const std::string prop = resolve_prop(trimmed(part), props, lineno);
        if (!props.is_env(prop)) throw StepSyntaxError(lineno, "cannot observe the action '" + prop + "'");
        step.observe_props.insert(prop);
        if (at == std::string::npos) break;
        start = at + 5;
      }
    } else {
      if (groups.size() != 1) throw StepSyntaxError(lineno, "too many <...> groups");
      step.kind = StepKind::Act;
      step.action = parse_action_slot(head, props, lineno);
      if (step.action.empty()) step.kind = StepKind::Observe;  // bare <proceed> etc.
    }
    out.steps.push_back(std::move(step));
  }
  if (out.steps.empty()) throw EmptyStepListError();
  for (const auto& s : out.steps)
    if (s.kind == StepKind::Conditional && s.else_behavior == ElseBehavior::Goto &&
        (s.goto_step < 1 || s.goto_step > static_cast<int>(out.steps.size())))
      throw ValidationError("goto target step " + std::to_string(s.goto_step) + " does not exist");
  return out;
}

namespace {

std::string condition_to_phrase(const FormulaPtr& f) {
  switch (f->op) {
    case Op::Atom: return display_name(f->atom_name);
    case Op::Not: return "no " + condition_to_phrase(f->lhs);
    case Op::And: return condition_to_phrase(f->lhs) + " and " + condition_to_phrase(f->rhs);
    case Op::Or: return condition_to_phrase(f->lhs) + " or " + condition_to_phrase(f->rhs);
    default: throw ValidationError("condition not expressible in step syntax: " + print_ltl(f));
  }
}

}  // namespace

std::string print_steps(const StepList& steps) {
  std::ostringstream out;
  for (std::size_t i = 0; i < steps.steps.size(); ++i) {
    const Step& s = steps.steps[i];
    out << (i + 1) << ". ";
    switch (s.kind) {
      case StepKind::Observe: {
        if (s.observe_props.empty()) {
          out << "<proceed>";
          break;
        }
        out << "<observe ";
        bool first = true;
        for (const auto& p : s.observe_props) {
          if (!first) out << " and ";
          out << display_name(p);
          first = false;
        }
        out << ">";
        break;
      }
      case StepKind::Conditional:
        out << "<if> <" << condition_to_phrase(s.condition) << ">, <"
            << (s.action.empty() ? "proceed" : display_name(s.action)) << ">";
        if (s.else_behavior == ElseBehavior::Goto) out << ", <else goto " << s.goto_step << ">";
        break;
      case StepKind::Act: out << "<" << display_name(s.action) << ">"; break;
    }
    out << ".\n";
  }
  return out.str();
}

namespace {

FormulaPtr negate(const FormulaPtr& f) {
  return f->op == Op::Not ? f->lhs : Formula::not_(f);
}

}  // namespace

ControllerFsa steps_to_controller(const StepList& steps, const PropSet& props, const std::string& name) {
  if (steps.steps.empty()) throw EmptyStepListError();
  const int n = static_cast<int>(steps.steps.size());

  NameSet inputs;
  for (const auto& s : steps.steps) {
    for (const auto& p : s.observe_props) inputs.insert(p);
    if (s.condition) collect_atoms(s.condition, inputs);
  }

  std::vector<std::string> state_names;
  for (int i = 0; i <= n; ++i) state_names.push_back("q" + std::to_string(i));

  std::vector<ControllerTransition> transitions;
  for (int i = 0; i < n; ++i) {
    const Step& s = steps.steps[i];
    switch (s.kind) {
      case StepKind::Observe:
        transitions.push_back(ControllerTransition{i, Formula::tt(), {}, true, i + 1});
        break;
      case StepKind::Act:
        transitions.push_back(ControllerTransition{i, Formula::tt(), {s.action}, false, i + 1});
        break;
      case StepKind::Conditional: {
        NameSet outs;
        if (!s.action.empty()) outs.insert(s.action);
        transitions.push_back(ControllerTransition{i, s.condition, outs, s.action.empty(), i + 1});
        const int else_to = s.else_behavior == ElseBehavior::Goto ? s.goto_step - 1 : i;
        transitions.push_back(ControllerTransition{i, negate(s.condition), {}, true, else_to});
        break;
      }
    }
  }
  transitions.push_back(ControllerTransition{n, Formula::tt(), {}, true, n});

  return ControllerFsa(name, std::vector<std::string>(inputs.begin(), inputs.end()),
                       props.actions(), state_names, 0, std::move(transitions));
}

}  // namespace specdrive
