#include "specdrive/modelcheck.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace specdrive {

// --- negation normal form over {lit, and, or, X, U, R} -----------------------

namespace {

FormulaPtr nnf(const FormulaPtr& f, bool negate) {
  switch (f->op) {
    case Op::Atom: return negate ? Formula::not_(f) : f;
    case Op::True: return negate ? Formula::ff() : Formula::tt();
    case Op::False: return negate ? Formula::tt() : Formula::ff();
    case Op::Not: return nnf(f->lhs, !negate);
    case Op::And:
      return negate ? Formula::or_(nnf(f->lhs, true), nnf(f->rhs, true))
                    : Formula::and_(nnf(f->lhs, false), nnf(f->rhs, false));
    case Op::Or:
      return negate ? Formula::and_(nnf(f->lhs, true), nnf(f->rhs, true))
                    : Formula::or_(nnf(f->lhs, false), nnf(f->rhs, false));
    case Op::Implies:
      return negate ? Formula::and_(nnf(f->lhs, false), nnf(f->rhs, true))
                    : Formula::or_(nnf(f->lhs, true), nnf(f->rhs, false));
    case Op::Next: return Formula::next(nnf(f->lhs, negate));
    case Op::Until:
      return negate ? Formula::release(nnf(f->lhs, true), nnf(f->rhs, true))
                    : Formula::until(nnf(f->lhs, false), nnf(f->rhs, false));
    case Op::Release:
      return negate ? Formula::until(nnf(f->lhs, true), nnf(f->rhs, true))
                    : Formula::release(nnf(f->lhs, false), nnf(f->rhs, false));
    case Op::Eventually:
      return negate ? Formula::release(Formula::ff(), nnf(f->lhs, true))
                    : Formula::until(Formula::tt(), nnf(f->lhs, false));
    case Op::Always:
      return negate ? Formula::until(Formula::tt(), nnf(f->lhs, true))
                    : Formula::release(Formula::ff(), nnf(f->lhs, false));
  }
  return f;
}

// Interns NNF formulas so tableau node sets can be integer sets with a
// deterministic order (creation order, independent of heap layout).
struct Interner {
  std::vector<FormulaPtr> forms;
  std::map<std::string, int> by_key;

  int intern(const FormulaPtr& f) {
    std::string key = print_ltl(f, true);
    auto it = by_key.find(key);
    if (it != by_key.end()) return it->second;
    const int id = static_cast<int>(forms.size());
    forms.push_back(f);
    by_key.emplace(std::move(key), id);
    return id;
  }
};

struct TableauNode {
  std::set<int> incoming;  // -1 marks an initial node
  std::set<int> neu, old, nxt;
};

bool is_literal(const FormulaPtr& f) {
  return f->op == Op::Atom || f->op == Op::True || f->op == Op::False ||
         (f->op == Op::Not && f->lhs->op == Op::Atom);
}

}  // namespace

BuchiAutomaton ltl_to_buchi(const FormulaPtr& phi, std::size_t max_nodes) {
  Interner in;
  const int root = in.intern(nnf(phi, false));

  std::vector<TableauNode> nodes;  // settled nodes, creation order

  // Recursive expansion (GPVW). `cur` is consumed.
  std::function<void(TableauNode)> expand = [&](TableauNode cur) {
    if (nodes.size() > max_nodes) throw FormulaTooLargeError(max_nodes);
    if (cur.neu.empty()) {
      for (auto& settled : nodes) {
        if (settled.old == cur.old && settled.nxt == cur.nxt) {
          settled.incoming.insert(cur.incoming.begin(), cur.incoming.end());
          return;
        }
      }
      const int id = static_cast<int>(nodes.size());
      nodes.push_back(cur);
      TableauNode succ;
      succ.incoming = {id};
      succ.neu = cur.nxt;
      expand(std::move(succ));
      return;
    }
    const int eta_id = *cur.neu.begin();
    cur.neu.erase(cur.neu.begin());
    const FormulaPtr eta = in.forms[eta_id];
    if (cur.old.count(eta_id)) {
      expand(std::move(cur));
      return;
    }
    if (is_literal(eta)) {
      if (eta->op == Op::False) return;  // contradiction
      if (eta->op != Op::True) {
        // discard on clash with an already-required literal
        FormulaPtr negated = eta->op == Op::Not ? eta->lhs : Formula::not_(eta);
        if (cur.old.count(in.intern(negated))) return;
      }
      cur.old.insert(eta_id);
      expand(std::move(cur));
      return;
    }
    switch (eta->op) {
      case Op::And: {
        cur.old.insert(eta_id);
        cur.neu.insert(in.intern(eta->lhs));
        cur.neu.insert(in.intern(eta->rhs));
        expand(std::move(cur));
        return;
      }
      case Op::Or: {
        TableauNode left = cur, right = cur;
        left.old.insert(eta_id);
        right.old.insert(eta_id);
        left.neu.insert(in.intern(eta->lhs));
        right.neu.insert(in.intern(eta->rhs));
        expand(std::move(left));
        expand(std::move(right));
        return;
      }
      case Op::Next: {
        cur.old.insert(eta_id);
        cur.nxt.insert(in.intern(eta->lhs));
        expand(std::move(cur));
        return;
      }
      case Op::Until: {
        TableauNode wait = cur, done = cur;
        wait.old.insert(eta_id);
        done.old.insert(eta_id);
        wait.neu.insert(in.intern(eta->lhs));
        wait.nxt.insert(eta_id);
        done.neu.insert(in.intern(eta->rhs));
        expand(std::move(wait));
        expand(std::move(done));
        return;
      }
      case Op::Release: {
        TableauNode wait = cur, done = cur;
        wait.old.insert(eta_id);
        done.old.insert(eta_id);
        wait.neu.insert(in.intern(eta->rhs));
        wait.nxt.insert(eta_id);
        done.neu.insert(in.intern(eta->lhs));
        done.neu.insert(in.intern(eta->rhs));
        expand(std::move(wait));
        expand(std::move(done));
        return;
      }
      default:
        throw ValidationError("unexpected operator in tableau: " + print_ltl(eta));
    }
  };

  TableauNode init;
  init.incoming = {-1};
  init.neu = {root};
  expand(std::move(init));

  // acceptance sets, one per until subformula in the closure
  std::vector<int> untils;
  for (std::size_t i = 0; i < in.forms.size(); ++i)
    if (in.forms[i]->op == Op::Until) untils.push_back(static_cast<int>(i));

  const std::size_t k_sets = untils.empty() ? 1 : untils.size();
  auto in_accept_set = [&](const TableauNode& n, std::size_t k) {
    if (untils.empty()) return true;
    const int u = untils[k];
    if (!n.old.count(u)) return true;
    return n.old.count(in.intern(in.forms[u]->rhs)) > 0;
  };

  // degeneralize: states are (node, counter)
  BuchiAutomaton nba;
  const std::size_t n_nodes = nodes.size();
  nba.states.resize(n_nodes * k_sets);
  nba.succ.resize(n_nodes * k_sets);
  auto state_id = [&](std::size_t node, std::size_t k) { return static_cast<int>(k * n_nodes + node); };

  for (std::size_t v = 0; v < n_nodes; ++v) {
    NameSet pos, neg;
    for (int fid : nodes[v].old) {
      const FormulaPtr& f = in.forms[fid];
      if (f->op == Op::Atom) pos.insert(f->atom_name);
      else if (f->op == Op::Not && f->lhs->op == Op::Atom) neg.insert(f->lhs->atom_name);
    }
    for (std::size_t k = 0; k < k_sets; ++k) {
      BuchiState& s = nba.states[state_id(v, k)];
      s.pos = pos;
      s.neg = neg;
      s.accepting = (k == k_sets - 1) && in_accept_set(nodes[v], k);
    }
  }
  for (std::size_t v = 0; v < n_nodes; ++v) {
    for (int u : nodes[v].incoming) {
      for (std::size_t k = 0; k < k_sets; ++k) {
        const std::size_t u_node = u < 0 ? 0 : static_cast<std::size_t>(u);
        const std::size_t k2 = (u >= 0 && in_accept_set(nodes[u_node], k)) ? (k + 1) % k_sets : k;
        if (u < 0) {
          if (k == 0) nba.inits.push_back(state_id(v, 0));
        } else {
          nba.succ[state_id(u_node, k)].push_back(state_id(v, k2));
        }
      }
    }
  }
  for (auto& v : nba.succ) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  std::sort(nba.inits.begin(), nba.inits.end());
  nba.inits.erase(std::unique(nba.inits.begin(), nba.inits.end()), nba.inits.end());
  return nba;
}

// --- emptiness of product x NBA ----------------------------------------------

namespace {

struct SyncGraph {
  // sync state = (product state, nba state)
  struct Edge {
    int to;
    int prod_edge;
    int label_idx;
  };
  std::vector<std::pair<int, int>> states;
  std::map<std::pair<int, int>, int> index;
  std::vector<std::vector<Edge>> succ;
  std::vector<char> accepting;
  std::vector<int> inits;
};

bool letter_ok(const BuchiState& b, const Letter& l) {
  for (const auto& a : b.pos)
    if (!l.count(a)) return false;
  for (const auto& a : b.neg)
    if (l.count(a)) return false;
  return true;
}

SyncGraph build_sync(const ProductAutomaton& prod, const BuchiAutomaton& nba) {
  SyncGraph g;
  auto intern = [&](int p, int b) {
    auto key = std::make_pair(p, b);
    auto it = g.index.find(key);
    if (it != g.index.end()) return it->second;
    const int id = static_cast<int>(g.states.size());
    g.index.emplace(key, id);
    g.states.push_back(key);
    g.succ.emplace_back();
    g.accepting.push_back(nba.states[b].accepting);
    return id;
  };

  std::vector<int> work;
  std::vector<char> expanded;
  for (int p : prod.init_states())
    for (int b : nba.inits) work.push_back(intern(p, b));

  while (!work.empty()) {
    const int id = work.back();
    work.pop_back();
    if (expanded.size() < g.states.size()) expanded.resize(g.states.size(), 0);
    if (expanded[id]) continue;
    expanded[id] = 1;
    const auto [p, b] = g.states[id];
    for (int ei : prod.out_edges(p)) {
      const ProductEdge& pe = prod.edges()[ei];
      for (std::size_t li = 0; li < pe.labels.size(); ++li) {
        if (!letter_ok(nba.states[b], pe.labels[li])) continue;
        for (int b2 : nba.succ[b]) {
          const int to = intern(pe.to, b2);
          work.push_back(to);
          g.succ[id].push_back(SyncGraph::Edge{to, ei, static_cast<int>(li)});
        }
      }
    }
  }
  return g;
}

// Nested DFS; returns an accepting lasso as sync-state indices with letters.
struct NdfsResult {
  bool found = false;
  std::vector<int> states;        // s0 .. sn, with sn == states[lasso_start]
  std::vector<std::pair<int, int>> letters;  // (prod_edge, label_idx) per step
  std::size_t lasso_start = 0;
};

struct Ndfs {
  const SyncGraph& g;
  std::vector<char> blue, red, cyan;
  std::vector<int> stack_states;                       // current blue stack
  std::vector<std::pair<int, int>> stack_letters;      // letter into stack_states[i] (i >= 1)
  std::vector<int> stack_pos;                          // state -> index on stack, -1 otherwise
  NdfsResult result;

  explicit Ndfs(const SyncGraph& g)
      : g(g), blue(g.states.size(), 0), red(g.states.size(), 0), cyan(g.states.size(), 0),
        stack_pos(g.states.size(), -1) {}

  bool dfs_red(int s, std::vector<int>& path_states, std::vector<std::pair<int, int>>& path_letters) {
    for (const auto& e : g.succ[s]) {
      if (cyan[e.to]) {
        path_states.push_back(e.to);
        path_letters.emplace_back(e.prod_edge, e.label_idx);
        return true;
      }
      if (!red[e.to]) {
        red[e.to] = 1;
        path_states.push_back(e.to);
        path_letters.emplace_back(e.prod_edge, e.label_idx);
        if (dfs_red(e.to, path_states, path_letters)) return true;
        path_states.pop_back();
        path_letters.pop_back();
      }
    }
    return false;
  }

  bool dfs_blue(int s) {
    cyan[s] = 1;
    stack_pos[s] = static_cast<int>(stack_states.size());
    stack_states.push_back(s);
    for (const auto& e : g.succ[s]) {
      if (!blue[e.to] && !cyan[e.to]) {
        stack_letters.emplace_back(e.prod_edge, e.label_idx);
        if (dfs_blue(e.to)) return true;
        stack_letters.pop_back();
      }
    }
    if (g.accepting[s]) {
      std::vector<int> path_states;
      std::vector<std::pair<int, int>> path_letters;
      red[s] = 1;
      if (dfs_red(s, path_states, path_letters)) {
        // lasso: stack prefix up to the hit state, then around via the red path
        const int hit = path_states.back();
        const std::size_t hit_idx = static_cast<std::size_t>(stack_pos[hit]);
        result.found = true;
        result.lasso_start = hit_idx;
        result.states.assign(stack_states.begin(), stack_states.end());
        result.letters.assign(stack_letters.begin(), stack_letters.end());
        result.states.insert(result.states.end(), path_states.begin(), path_states.end());
        result.letters.insert(result.letters.end(), path_letters.begin(), path_letters.end());
        return true;
      }
    }
    cyan[s] = 0;
    stack_pos[s] = -1;
    stack_states.pop_back();
    blue[s] = 1;
    return false;
  }

};

}  // namespace

Verdict check(const ProductAutomaton& prod, const std::string& spec_name, const FormulaPtr& phi) {
  Verdict v;
  v.spec_name = spec_name;

  const BuchiAutomaton nba = ltl_to_buchi(Formula::not_(phi));
  const SyncGraph g = build_sync(prod, nba);

  Ndfs search(g);
  bool found = false;
  // roots: the initial sync states, in deterministic order
  std::vector<int> roots;
  for (int p : prod.init_states())
    for (int b : nba.inits) {
      auto it = g.index.find({p, b});
      if (it != g.index.end()) roots.push_back(it->second);
    }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  for (int r : roots) {
    if (!search.blue[r] && !search.cyan[r] && search.dfs_blue(r)) {
      found = true;
      break;
    }
  }

  if (!found) {
    v.holds = true;
    return v;
  }

  v.holds = false;
  LabeledTrajectory t;
  const NdfsResult& res = search.result;
  for (int s : res.states) t.state_seq.push_back(prod.states()[g.states[s].first]);
  for (const auto& [ei, li] : res.letters) t.label_seq.push_back(prod.edges()[ei].labels[li]);
  t.lasso_start = res.lasso_start;
  v.counterexample = std::move(t);
  return v;
}

VerificationReport check_all(const ProductAutomaton& prod,
                             const std::vector<std::pair<std::string, FormulaPtr>>& specs,
                             const std::string& controller_id) {
  if (specs.empty()) throw ValidationError("empty specification list");
  VerificationReport report;
  report.controller_id = controller_id;
  report.total = static_cast<int>(specs.size());
  for (const auto& [name, phi] : specs) {
    Verdict v = check(prod, name, phi);
    if (v.holds) ++report.satisfied_count;
    report.verdicts.push_back(std::move(v));
  }
  return report;
}

// --- SMV export ---------------------------------------------------------------

namespace {

bool smv_reserved(const std::string& w) {
  static const std::set<std::string> words = {
      "case", "esac", "in",   "init",  "next", "self", "union", "mod",  "abs",
      "max",  "min",  "xor",  "xnor",  "bool", "word", "count", "process", "main",
  };
  return words.count(w) > 0;
}

std::string smv_name(const std::string& prop) { return smv_reserved(prop) ? prop + "_p" : prop; }

void print_smv_rec(const FormulaPtr& f, int parent_prec, bool right_side, std::string& out) {
  auto prec = [](Op op) {
    switch (op) {
      case Op::Implies: return 1;
      case Op::Or: return 2;
      case Op::And: return 3;
      case Op::Until:
      case Op::Release: return 4;
      case Op::Not:
      case Op::Next:
      case Op::Eventually:
      case Op::Always: return 5;
      default: return 6;
    }
  };
  const int p = prec(f->op);
  bool need = p < parent_prec ||
              (p == parent_prec && !right_side &&
               (f->op == Op::Implies || f->op == Op::Until || f->op == Op::Release));
  if (need) out += '(';
  switch (f->op) {
    case Op::Atom: out += smv_name(f->atom_name); break;
    case Op::True: out += "TRUE"; break;
    case Op::False: out += "FALSE"; break;
    case Op::Not:
      out += '!';
      print_smv_rec(f->lhs, p, true, out);
      break;
    case Op::Next:
    case Op::Eventually:
    case Op::Always:
      out += f->op == Op::Next ? "X " : f->op == Op::Eventually ? "F " : "G ";
      print_smv_rec(f->lhs, p, true, out);
      break;
    default: {
      const char* sym = f->op == Op::And       ? " & "
                        : f->op == Op::Or      ? " | "
                        : f->op == Op::Implies ? " -> "
                        : f->op == Op::Until   ? " U "
                                               : " V ";
      print_smv_rec(f->lhs, p, false, out);
      out += sym;
      print_smv_rec(f->rhs, p, true, out);
      break;
    }
  }
  if (need) out += ')';
}

std::string print_smv(const FormulaPtr& f) {
  std::string out;
  print_smv_rec(f, 0, true, out);
  return out;
}

}  // namespace

std::string export_smv(const TransitionSystem& model, const ControllerFsa& controller,
                       const std::vector<std::pair<std::string, FormulaPtr>>& specs) {
  const ControllerFsa completed = complete_controller(controller);
  const ProductAutomaton prod = build_product(model, completed);

  // Letters live on product edges; NuSMV wants them on states. One module
  // state per (edge, label) pair, connected when the edges chain.
  struct Node {
    int edge;
    int label;
  };
  std::vector<Node> nodes;
  for (std::size_t ei = 0; ei < prod.edges().size(); ++ei)
    for (std::size_t li = 0; li < prod.edges()[ei].labels.size(); ++li)
      nodes.push_back(Node{static_cast<int>(ei), static_cast<int>(li)});

  std::ostringstream out;
  out << "-- product of model '" << model.name() << "' and controller '" << controller.name() << "'\n";
  out << "-- generated by specdrive\n";
  out << "MODULE main\n";

  if (nodes.empty()) {
    // no behavior at all; emit an inert module so the file stays loadable
    out << "VAR\n  step : {t_none};\nTRANS next(step) = step;\n";
    for (const auto& [name, phi] : specs)
      out << "-- " << name << "\nLTLSPEC " << print_smv(phi) << "\n";
    return out.str();
  }

  out << "VAR\n  step : {";
  for (std::size_t i = 0; i < nodes.size(); ++i) out << (i ? ", " : "") << "t" << i;
  out << "};\n";

  // proposition and action truth, per module state; spec atoms get a DEFINE
  // even when the product never shows them
  std::vector<std::string> vocab = model.props();
  auto add_vocab = [&](const std::string& a) {
    if (std::find(vocab.begin(), vocab.end(), a) == vocab.end()) vocab.push_back(a);
  };
  for (const auto& a : completed.output_props()) add_vocab(a);
  for (const auto& [name, phi] : specs)
    for (const auto& a : atoms_of(phi)) add_vocab(a);
  out << "DEFINE\n";
  for (const auto& name : vocab) {
    std::vector<std::size_t> where;
    for (std::size_t i = 0; i < nodes.size(); ++i)
      if (prod.edges()[nodes[i].edge].labels[nodes[i].label].count(name)) where.push_back(i);
    out << "  " << smv_name(name) << " := ";
    if (where.empty()) {
      out << "FALSE;\n";
      continue;
    }
    out << "step in {";
    for (std::size_t k = 0; k < where.size(); ++k) out << (k ? ", " : "") << "t" << where[k];
    out << "};\n";
  }

  std::set<int> init_states(prod.init_states().begin(), prod.init_states().end());
  out << "INIT\n  step in {";
  bool first = true;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!init_states.count(prod.edges()[nodes[i].edge].from)) continue;
    out << (first ? "" : ", ") << "t" << i;
    first = false;
  }
  out << "};\n";

  out << "TRANS\n  case\n";
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const int head = prod.edges()[nodes[i].edge].to;
    std::vector<std::size_t> next;
    for (std::size_t j = 0; j < nodes.size(); ++j)
      if (prod.edges()[nodes[j].edge].from == head) next.push_back(j);
    out << "    step = t" << i << " : ";
    if (next.empty()) {
      out << "FALSE;\n";
      continue;
    }
    out << "next(step) in {";
    for (std::size_t k = 0; k < next.size(); ++k) out << (k ? ", " : "") << "t" << next[k];
    out << "};\n";
  }
  out << "  esac;\n";

  out << "\n-- step tN carries the observations and action of one product move:\n";
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const ProductEdge& e = prod.edges()[nodes[i].edge];
    out << "-- t" << i << " = " << prod.state_name(e.from) << " -> " << prod.state_name(e.to) << " ";
    out << "{";
    bool f2 = true;
    for (const auto& a : e.labels[nodes[i].label]) {
      out << (f2 ? "" : ", ") << a;
      f2 = false;
    }
    out << "}\n";
  }

  out << "\n";
  for (const auto& [name, phi] : specs) {
    out << "-- " << name << "\n";
    out << "LTLSPEC " << print_smv(phi) << "\n";
  }
  return out.str();
}

}  // namespace specdrive
