#include "specdrive/formats.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace specdrive {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

[[noreturn]] void fail(const std::string& source, int line, const std::string& what) {
  throw IoError(source + ":" + std::to_string(line) + ": " + what);
}

// "{a, b}" or "{}" -> set
NameSet parse_brace_set(const std::string& text, const std::string& source, int line) {
  std::string t = trim(text);
  if (t.size() < 2 || t.front() != '{' || t.back() != '}') fail(source, line, "expected {..} set");
  NameSet out;
  std::string inner = t.substr(1, t.size() - 2);
  std::istringstream in(inner);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.insert(item);
  }
  return out;
}

std::string brace_set_to_string(const NameSet& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& a : s) {
    if (!first) out += ", ";
    first = false;
    out += a;
  }
  return out + "}";
}

struct EdgeLine {
  std::string from, to, bracket, tail;
};

// "p0 -> p1 [guard] / outputs" (the "/ outputs" part only for controllers)
EdgeLine parse_edge_line(const std::string& rest, const std::string& source, int line) {
  EdgeLine e;
  std::size_t arrow = rest.find("->");
  if (arrow == std::string::npos) fail(source, line, "edge needs '->'");
  e.from = trim(rest.substr(0, arrow));
  std::string after = trim(rest.substr(arrow + 2));
  std::size_t lb = after.find('[');
  std::size_t rb = after.rfind(']');
  if (lb == std::string::npos || rb == std::string::npos || rb < lb)
    fail(source, line, "edge needs a [guard]");
  e.to = trim(after.substr(0, lb));
  e.bracket = trim(after.substr(lb + 1, rb - lb - 1));
  e.tail = trim(after.substr(rb + 1));
  if (e.from.empty() || e.to.empty()) fail(source, line, "edge endpoints missing");
  return e;
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

TransitionSystem parse_model_text(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::string name = "model";
  std::vector<std::string> props;
  std::vector<NamedState> states;
  std::vector<GuardedEdge> edges;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::istringstream ls(t);
    std::string kw;
    ls >> kw;
    std::string rest = trim(t.substr(kw.size()));
    if (kw == "model") {
      if (rest.empty()) fail(source, lineno, "model needs a name");
      name = rest;
    } else if (kw == "props") {
      props = split_ws(rest);
    } else if (kw == "state") {
      std::size_t brace = rest.find('{');
      if (brace == std::string::npos) fail(source, lineno, "state needs a {label}");
      const std::string sname = trim(rest.substr(0, brace));
      if (sname.empty()) fail(source, lineno, "state needs a name");
      states.push_back(NamedState{sname, parse_brace_set(rest.substr(brace), source, lineno)});
    } else if (kw == "edge") {
      EdgeLine e = parse_edge_line(rest, source, lineno);
      if (!e.tail.empty()) fail(source, lineno, "unexpected text after edge guard");
      edges.push_back(GuardedEdge{e.from, e.bracket, e.to});
    } else {
      fail(source, lineno, "unknown directive '" + kw + "'");
    }
  }
  try {
    return model_from_edges(name, props, states, edges);
  } catch (const Error& e) {
    throw IoError(source + ": " + e.what());
  }
}

TransitionSystem load_model(const std::string& path) {
  return parse_model_text(read_text_file(path), path);
}

std::string model_to_text(const TransitionSystem& model) {
  std::ostringstream out;
  out << "model " << model.name() << "\n";
  out << "props";
  for (const auto& p : model.props()) out << " " << p;
  out << "\n";
  for (const auto& s : model.states()) out << "state " << s.name << " " << brace_set_to_string(s.label) << "\n";
  for (const auto& e : model.edges()) {
    out << "edge " << model.states()[e.from].name << " -> " << model.states()[e.to].name << " ["
        << (e.guard_text.empty() ? "true" : e.guard_text) << "]\n";
  }
  return out.str();
}

void save_model(const TransitionSystem& model, const std::string& path) {
  write_text_file(path, model_to_text(model));
}

ControllerFsa parse_controller_text(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::string name = "controller";
  std::vector<std::string> inputs, outputs;
  std::string init;
  struct RawEdge {
    std::string from, to, guard, out;
    int line;
  };
  std::vector<RawEdge> raw;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::istringstream ls(t);
    std::string kw;
    ls >> kw;
    std::string rest = trim(t.substr(kw.size()));
    if (kw == "controller") {
      name = rest;
    } else if (kw == "inputs") {
      inputs = split_ws(rest);
    } else if (kw == "outputs") {
      outputs = split_ws(rest);
    } else if (kw == "init") {
      init = rest;
    } else if (kw == "edge") {
      EdgeLine e = parse_edge_line(rest, source, lineno);
      if (e.tail.empty() || e.tail[0] != '/') fail(source, lineno, "edge needs '/ outputs'");
      raw.push_back(RawEdge{e.from, e.to, e.bracket, trim(e.tail.substr(1)), lineno});
    } else {
      fail(source, lineno, "unknown directive '" + kw + "'");
    }
  }
  if (init.empty()) throw IoError(source + ": missing 'init'");

  // state order: first appearance in edges, init forced present
  std::vector<std::string> state_names;
  std::map<std::string, int> index;
  auto intern = [&](const std::string& s) {
    auto it = index.find(s);
    if (it != index.end()) return it->second;
    const int id = static_cast<int>(state_names.size());
    index.emplace(s, id);
    state_names.push_back(s);
    return id;
  };
  intern(init);
  for (const auto& e : raw) {
    intern(e.from);
    intern(e.to);
  }

  std::vector<ControllerTransition> transitions;
  for (const auto& e : raw) {
    ControllerTransition t;
    t.from = intern(e.from);
    t.to = intern(e.to);
    try {
      t.guard = parse_ltl_unchecked(e.guard);
    } catch (const Error& err) {
      fail(source, e.line, err.what());
    }
    if (e.out == "eps") {
      t.noop = true;
    } else {
      std::istringstream os(e.out);
      std::string a;
      while (std::getline(os, a, ',')) {
        a = trim(a);
        if (!a.empty()) t.outputs.insert(a);
      }
      if (t.outputs.empty()) fail(source, e.line, "edge outputs empty; use 'eps'");
    }
    transitions.push_back(std::move(t));
  }
  try {
    return ControllerFsa(name, inputs, outputs, state_names, intern(init), std::move(transitions));
  } catch (const Error& e) {
    throw IoError(source + ": " + e.what());
  }
}

ControllerFsa load_controller(const std::string& path) {
  return parse_controller_text(read_text_file(path), path);
}

std::string controller_to_text(const ControllerFsa& c) {
  std::ostringstream out;
  out << "controller " << c.name() << "\n";
  out << "inputs";
  for (const auto& p : c.input_props()) out << " " << p;
  out << "\noutputs";
  for (const auto& p : c.output_props()) out << " " << p;
  out << "\ninit " << c.state_names()[c.init_state()] << "\n";
  for (const auto& t : c.transitions()) {
    out << "edge " << c.state_names()[t.from] << " -> " << c.state_names()[t.to] << " ["
        << print_ltl(t.guard) << "] / ";
    if (t.noop) {
      out << "eps";
    } else {
      bool first = true;
      for (const auto& a : t.outputs) {
        if (!first) out << ",";
        first = false;
        out << a;
      }
    }
    out << "\n";
  }
  return out.str();
}

StepList load_steps(const std::string& path, const PropSet& props) {
  return parse_steps(read_text_file(path), props);
}

std::vector<std::pair<std::string, FormulaPtr>> parse_specs_text(const std::string& text,
                                                                 const PropSet& props,
                                                                 const std::string& source) {
  std::vector<std::pair<std::string, FormulaPtr>> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::size_t at = t.find(":=");
    if (at == std::string::npos) fail(source, lineno, "expected 'name := formula'");
    const std::string name = trim(t.substr(0, at));
    const std::string body = trim(t.substr(at + 2));
    if (name.empty() || !PropSet::valid_name(name)) fail(source, lineno, "bad spec name '" + name + "'");
    for (const auto& [n, f] : out)
      if (n == name) fail(source, lineno, "duplicate spec name '" + name + "'");
    try {
      out.emplace_back(name, parse_ltl(body, props));
    } catch (const Error& e) {
      fail(source, lineno, e.what());
    }
  }
  if (out.empty()) throw IoError(source + ": no specifications found");
  return out;
}

std::vector<std::pair<std::string, FormulaPtr>> load_specs(const std::string& path, const PropSet& props) {
  return parse_specs_text(read_text_file(path), props, path);
}

PredicateSpec load_predicate(const std::string& path) {
  const std::string text = read_text_file(path);
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  PredicateSpec spec;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::istringstream ls(t);
    std::string kw;
    ls >> kw;
    std::string rest = trim(t.substr(kw.size()));
    if (kw == "props") {
      spec.props = split_ws(rest);
    } else if (kw == "allow") {
      std::size_t arrow = rest.find("->");
      if (arrow == std::string::npos) fail(path, lineno, "allow needs '{..} -> {..}'");
      spec.pairs.emplace_back(parse_brace_set(rest.substr(0, arrow), path, lineno),
                              parse_brace_set(rest.substr(arrow + 2), path, lineno));
    } else {
      fail(path, lineno, "unknown directive '" + kw + "'");
    }
  }
  if (spec.props.empty()) throw IoError(path + ": missing 'props'");
  return spec;
}

// --- rendering -----------------------------------------------------------------

std::string letter_to_string(const Letter& l) {
  return brace_set_to_string(l);
}

std::string report_to_text(const VerificationReport& report, const ProductAutomaton& prod) {
  std::ostringstream out;
  out << "controller " << report.controller_id << ": " << report.satisfied_count << "/" << report.total
      << " specifications satisfied\n";
  for (const auto& v : report.verdicts) {
    out << "  " << v.spec_name << ": " << (v.holds ? "holds" : "FAILS") << "\n";
    if (!v.holds && v.counterexample) {
      out << "    counterexample: " << format_trajectory(prod, *v.counterexample) << "\n";
    }
  }
  return out.str();
}

std::string report_to_records(const VerificationReport& report, const ProductAutomaton& prod) {
  std::ostringstream out;
  std::map<ProductState, int> index;
  for (std::size_t i = 0; i < prod.states().size(); ++i) index[prod.states()[i]] = static_cast<int>(i);
  for (const auto& v : report.verdicts) {
    nlohmann::json j{{"controller", report.controller_id}, {"spec", v.spec_name}, {"holds", v.holds}};
    if (!v.holds && v.counterexample) {
      nlohmann::json states = nlohmann::json::array();
      nlohmann::json labels = nlohmann::json::array();
      const auto& t = *v.counterexample;
      for (const auto& s : t.state_seq) {
        const int id = index.at(s);
        states.push_back(
            nlohmann::json::array({prod.model_state_name(id), prod.ctrl_state_name(id)}));
      }
      for (const auto& l : t.label_seq) labels.push_back(std::vector<std::string>(l.begin(), l.end()));
      nlohmann::json ce{{"states", states}, {"labels", labels}};
      if (t.lasso_start) ce["lasso_start"] = *t.lasso_start;
      j["counterexample"] = ce;
    }
    out << j.dump() << "\n";
  }
  return out.str();
}

std::string stats_to_text(const SatisfactionStats& stats) {
  std::ostringstream out;
  out << "spec            satisfied/runs      p\n";
  for (const auto& r : stats.rows) {
    std::ostringstream p;
    p.setf(std::ios::fixed);
    p.precision(4);
    p << r.p();
    out << "  " << r.spec;
    for (std::size_t i = r.spec.size(); i < 14; ++i) out << ' ';
    out << r.satisfying_runs << "/" << r.total_runs << "    " << p.str() << "\n";
  }
  return out.str();
}

std::string stats_to_records(const SatisfactionStats& stats) {
  std::ostringstream out;
  for (const auto& r : stats.rows) {
    nlohmann::json j{{"spec", r.spec},
                     {"satisfying_runs", r.satisfying_runs},
                     {"total_runs", r.total_runs},
                     {"p", r.p()}};
    out << j.dump() << "\n";
  }
  return out.str();
}

std::string trace_to_log(const FiniteTrace& trace) {
  std::ostringstream out;
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    out << i << " |";
    for (const auto& o : trace.steps[i].observations) out << " " << o;
    out << " |";
    for (const auto& a : trace.steps[i].actions) out << " " << a;
    out << "\n";
  }
  return out.str();
}

}  // namespace specdrive
