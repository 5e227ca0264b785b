#include "specdrive/logic.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <unordered_map>

namespace specdrive {

bool PropSet::valid_name(const std::string& name) {
  if (name.empty()) return false;
  if (name[0] < 'a' || name[0] > 'z') return false;
  for (char c : name) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
    if (!ok) return false;
  }
  return true;
}

PropSet PropSet::make(std::vector<std::string> env, std::vector<std::string> action) {
  PropSet ps;
  for (const auto& n : env) {
    if (!valid_name(n)) throw ValidationError("bad proposition name '" + n + "'");
    if (!ps.env_set_.insert(n).second) throw ValidationError("duplicate proposition '" + n + "'");
  }
  for (const auto& n : action) {
    if (!valid_name(n)) throw ValidationError("bad action name '" + n + "'");
    if (ps.env_set_.count(n)) throw ValidationError("name '" + n + "' declared as both proposition and action");
    if (!ps.action_set_.insert(n).second) throw ValidationError("duplicate action '" + n + "'");
  }
  ps.env_ = std::move(env);
  ps.action_ = std::move(action);
  return ps;
}

static FormulaPtr mk(Op op, std::string atom, FormulaPtr l, FormulaPtr r) {
  auto f = std::make_shared<Formula>();
  f->op = op;
  f->atom_name = std::move(atom);
  f->lhs = std::move(l);
  f->rhs = std::move(r);
  return f;
}

FormulaPtr Formula::atom(std::string name) { return mk(Op::Atom, std::move(name), nullptr, nullptr); }
FormulaPtr Formula::tt() { return mk(Op::True, "", nullptr, nullptr); }
FormulaPtr Formula::ff() { return mk(Op::False, "", nullptr, nullptr); }
FormulaPtr Formula::not_(FormulaPtr f) { return mk(Op::Not, "", std::move(f), nullptr); }
FormulaPtr Formula::and_(FormulaPtr a, FormulaPtr b) { return mk(Op::And, "", std::move(a), std::move(b)); }
FormulaPtr Formula::or_(FormulaPtr a, FormulaPtr b) { return mk(Op::Or, "", std::move(a), std::move(b)); }
FormulaPtr Formula::implies(FormulaPtr a, FormulaPtr b) { return mk(Op::Implies, "", std::move(a), std::move(b)); }
FormulaPtr Formula::next(FormulaPtr f) { return mk(Op::Next, "", std::move(f), nullptr); }
FormulaPtr Formula::until(FormulaPtr a, FormulaPtr b) { return mk(Op::Until, "", std::move(a), std::move(b)); }
FormulaPtr Formula::release(FormulaPtr a, FormulaPtr b) { return mk(Op::Release, "", std::move(a), std::move(b)); }
FormulaPtr Formula::eventually(FormulaPtr f) { return mk(Op::Eventually, "", std::move(f), nullptr); }
FormulaPtr Formula::always(FormulaPtr f) { return mk(Op::Always, "", std::move(f), nullptr); }

bool structurally_equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->op != b->op) return false;
  if (a->op == Op::Atom) return a->atom_name == b->atom_name;
  return structurally_equal(a->lhs, b->lhs) && structurally_equal(a->rhs, b->rhs);
}

// --- parser -----------------------------------------------------------------

namespace {

enum class Tok { Ident, True, False, Not, And, Or, Implies, X, F, G, U, LParen, RParen, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

class Lexer {
public:
  explicit Lexer(const std::string& text) : text_(text) { advance(); }
  const Token& peek() const { return cur_; }
  Token take() {
    Token t = cur_;
    advance();
    return t;
  }

private:
  void advance() {
    while (i_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[i_]))) ++i_;
    cur_.pos = i_;
    if (i_ >= text_.size()) {
      cur_ = {Tok::End, "", i_};
      return;
    }
    const char c = text_[i_];
    switch (c) {
      case '(': cur_ = {Tok::LParen, "(", i_++}; return;
      case ')': cur_ = {Tok::RParen, ")", i_++}; return;
      case '!': cur_ = {Tok::Not, "!", i_++}; return;
      case '&': cur_ = {Tok::And, "&", i_++}; return;
      case '|': cur_ = {Tok::Or, "|", i_++}; return;
      case '-':
        if (i_ + 1 < text_.size() && text_[i_ + 1] == '>') {
          cur_ = {Tok::Implies, "->", i_};
          i_ += 2;
          return;
        }
        throw SyntaxError(i_, "'->'", std::string(1, c));
      default: break;
    }
    if (c == 'X' || c == 'F' || c == 'G' || c == 'U') {
      // single-letter temporal operators; must not run into an identifier
      const std::size_t start = i_++;
      if (i_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[i_])) || text_[i_] == '_'))
        throw SyntaxError(start, "operator", text_.substr(start, 2));
      Tok k = c == 'X' ? Tok::X : c == 'F' ? Tok::F : c == 'G' ? Tok::G : Tok::U;
      cur_ = {k, std::string(1, c), start};
      return;
    }
    if (c >= 'a' && c <= 'z') {
      std::size_t start = i_;
      while (i_ < text_.size() &&
             (std::islower(static_cast<unsigned char>(text_[i_])) ||
              std::isdigit(static_cast<unsigned char>(text_[i_])) || text_[i_] == '_'))
        ++i_;
      std::string word = text_.substr(start, i_ - start);
      if (word == "true") cur_ = {Tok::True, word, start};
      else if (word == "false") cur_ = {Tok::False, word, start};
      else cur_ = {Tok::Ident, word, start};
      return;
    }
    throw SyntaxError(i_, "formula token", std::string(1, c));
  }

  const std::string& text_;
  std::size_t i_ = 0;
  Token cur_;
};

class Parser {
public:
  Parser(const std::string& text, const PropSet* props) : lex_(text), props_(props) {}

  FormulaPtr parse() {
    FormulaPtr f = implies_level();
    if (lex_.peek().kind != Tok::End)
      throw SyntaxError(lex_.peek().pos, "end of input", lex_.peek().text);
    return f;
  }

private:
  FormulaPtr implies_level() {
    FormulaPtr l = or_level();
    if (lex_.peek().kind == Tok::Implies) {
      lex_.take();
      return Formula::implies(l, implies_level());  // right-assoc
    }
    return l;
  }

  FormulaPtr or_level() {
    FormulaPtr l = and_level();
    while (lex_.peek().kind == Tok::Or) {
      lex_.take();
      l = Formula::or_(l, and_level());
    }
    return l;
  }

  FormulaPtr and_level() {
    FormulaPtr l = until_level();
    while (lex_.peek().kind == Tok::And) {
      lex_.take();
      l = Formula::and_(l, until_level());
    }
    return l;
  }

  FormulaPtr until_level() {
    FormulaPtr l = unary_level();
    if (lex_.peek().kind == Tok::U) {
      lex_.take();
      return Formula::until(l, until_level());  // right-assoc
    }
    return l;
  }

  FormulaPtr unary_level() {
    const Token t = lex_.peek();
    switch (t.kind) {
      case Tok::Not: lex_.take(); return Formula::not_(unary_level());
      case Tok::X: lex_.take(); return Formula::next(unary_level());
      case Tok::F: lex_.take(); return Formula::eventually(unary_level());
      case Tok::G: lex_.take(); return Formula::always(unary_level());
      case Tok::True: lex_.take(); return Formula::tt();
      case Tok::False: lex_.take(); return Formula::ff();
      case Tok::Ident: {
        lex_.take();
        if (props_ && !props_->contains(t.text)) throw UnknownPropositionError(t.text);
        return Formula::atom(t.text);
      }
      case Tok::LParen: {
        lex_.take();
        FormulaPtr f = implies_level();
        if (lex_.peek().kind != Tok::RParen)
          throw SyntaxError(lex_.peek().pos, "')'", lex_.peek().text);
        lex_.take();
        return f;
      }
      default:
        throw SyntaxError(t.pos, "proposition, constant, unary operator or '('", t.text.empty() ? "end of input" : t.text);
    }
  }

  Lexer lex_;
  const PropSet* props_;
};

}  // namespace

FormulaPtr parse_ltl(const std::string& text, const PropSet& props) {
  if (text.find_first_not_of(" \t\r\n") == std::string::npos)
    throw SyntaxError(0, "formula", "empty input");
  return Parser(text, &props).parse();
}

FormulaPtr parse_ltl_unchecked(const std::string& text) {
  if (text.find_first_not_of(" \t\r\n") == std::string::npos)
    throw SyntaxError(0, "formula", "empty input");
  return Parser(text, nullptr).parse();
}

// --- printer ----------------------------------------------------------------

namespace {

int precedence(Op op) {
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
}

void print_rec(const FormulaPtr& f, int parent_prec, bool right_side, bool full, std::string& out) {
  const int prec = precedence(f->op);
  bool need_paren = full && f->op != Op::Atom && f->op != Op::True && f->op != Op::False;
  if (!need_paren) {
    if (prec < parent_prec) need_paren = true;
    // equal precedence: parenthesize against the parse associativity
    // (-> and U associate right, & and | left)
    if (prec == parent_prec && !right_side &&
        (f->op == Op::Implies || f->op == Op::Until || f->op == Op::Release))
      need_paren = true;
    if (prec == parent_prec && right_side && (f->op == Op::And || f->op == Op::Or))
      need_paren = true;
  }
  if (need_paren) out += '(';
  switch (f->op) {
    case Op::Atom: out += f->atom_name; break;
    case Op::True: out += "true"; break;
    case Op::False: out += "false"; break;
    case Op::Not:
      out += '!';
      print_rec(f->lhs, precedence(Op::Not), true, full, out);
      break;
    case Op::Next:
    case Op::Eventually:
    case Op::Always:
      out += f->op == Op::Next ? "X " : f->op == Op::Eventually ? "F " : "G ";
      print_rec(f->lhs, precedence(f->op), true, full, out);
      break;
    case Op::And:
    case Op::Or:
    case Op::Implies:
    case Op::Until:
    case Op::Release: {
      const char* sym = f->op == Op::And     ? " & "
                        : f->op == Op::Or    ? " | "
                        : f->op == Op::Implies ? " -> "
                        : f->op == Op::Until ? " U "
                                             : " R ";
      print_rec(f->lhs, prec, false, full, out);
      out += sym;
      print_rec(f->rhs, prec, true, full, out);
      break;
    }
  }
  if (need_paren) out += ')';
}

}  // namespace

std::string print_ltl(const FormulaPtr& f, bool full_parens) {
  std::string out;
  print_rec(f, 0, true, full_parens, out);
  return out;
}

// --- desugar ----------------------------------------------------------------

FormulaPtr desugar(const FormulaPtr& f) {
  switch (f->op) {
    case Op::Atom:
    case Op::True: return f;
    case Op::False: return Formula::not_(Formula::tt());
    case Op::Not: return Formula::not_(desugar(f->lhs));
    case Op::Or: return Formula::or_(desugar(f->lhs), desugar(f->rhs));
    case Op::And:
      return Formula::not_(Formula::or_(Formula::not_(desugar(f->lhs)), Formula::not_(desugar(f->rhs))));
    case Op::Implies: return Formula::or_(Formula::not_(desugar(f->lhs)), desugar(f->rhs));
    case Op::Next: return Formula::next(desugar(f->lhs));
    case Op::Until: return Formula::until(desugar(f->lhs), desugar(f->rhs));
    case Op::Release:
      // a R b = !(!a U !b)
      return Formula::not_(Formula::until(Formula::not_(desugar(f->lhs)), Formula::not_(desugar(f->rhs))));
    case Op::Eventually: return Formula::until(Formula::tt(), desugar(f->lhs));
    case Op::Always:
      return Formula::not_(Formula::until(Formula::tt(), Formula::not_(desugar(f->lhs))));
  }
  return f;
}

void collect_atoms(const FormulaPtr& f, NameSet& out) {
  if (!f) return;
  if (f->op == Op::Atom) out.insert(f->atom_name);
  collect_atoms(f->lhs, out);
  collect_atoms(f->rhs, out);
}

NameSet atoms_of(const FormulaPtr& f) {
  NameSet out;
  collect_atoms(f, out);
  return out;
}

bool is_boolean(const FormulaPtr& f) {
  if (!f) return true;
  switch (f->op) {
    case Op::Next:
    case Op::Until:
    case Op::Release:
    case Op::Eventually:
    case Op::Always: return false;
    default: return is_boolean(f->lhs) && is_boolean(f->rhs);
  }
}

// --- evaluation ---------------------------------------------------------------

NameSet TraceStep::letter() const {
  NameSet l = observations;
  l.insert(actions.begin(), actions.end());
  return l;
}

bool eval_finite(const FormulaPtr& f, const FiniteTrace& trace, std::size_t position) {
  const std::size_t n = trace.size();
  if (position >= n) throw ValidationError("trace position out of range");
  switch (f->op) {
    case Op::Atom: {
      const TraceStep& s = trace.steps[position];
      return s.observations.count(f->atom_name) > 0 || s.actions.count(f->atom_name) > 0;
    }
    case Op::True: return true;
    case Op::False: return false;
    case Op::Not: return !eval_finite(f->lhs, trace, position);
    case Op::And: return eval_finite(f->lhs, trace, position) && eval_finite(f->rhs, trace, position);
    case Op::Or: return eval_finite(f->lhs, trace, position) || eval_finite(f->rhs, trace, position);
    case Op::Implies: return !eval_finite(f->lhs, trace, position) || eval_finite(f->rhs, trace, position);
    case Op::Next: return position + 1 < n && eval_finite(f->lhs, trace, position + 1);
    case Op::Until:
      for (std::size_t j = position; j < n; ++j) {
        if (eval_finite(f->rhs, trace, j)) return true;
        if (!eval_finite(f->lhs, trace, j)) return false;
      }
      return false;
    case Op::Release:
      for (std::size_t j = position; j < n; ++j) {
        if (!eval_finite(f->rhs, trace, j)) return false;
        if (eval_finite(f->lhs, trace, j)) return true;
      }
      return true;  // rhs held to the end of the trace
    case Op::Eventually:
      for (std::size_t j = position; j < n; ++j)
        if (eval_finite(f->lhs, trace, j)) return true;
      return false;
    case Op::Always:
      for (std::size_t j = position; j < n; ++j)
        if (!eval_finite(f->lhs, trace, j)) return false;
      return true;
  }
  return false;
}

bool eval_letter_bool(const FormulaPtr& f, const Letter& letter) {
  switch (f->op) {
    case Op::Atom: return letter.count(f->atom_name) > 0;
    case Op::True: return true;
    case Op::False: return false;
    case Op::Not: return !eval_letter_bool(f->lhs, letter);
    case Op::And: return eval_letter_bool(f->lhs, letter) && eval_letter_bool(f->rhs, letter);
    case Op::Or: return eval_letter_bool(f->lhs, letter) || eval_letter_bool(f->rhs, letter);
    case Op::Implies: return !eval_letter_bool(f->lhs, letter) || eval_letter_bool(f->rhs, letter);
    default: throw ValidationError("temporal operator in boolean context: " + print_ltl(f));
  }
}

// Evaluation on an ultimately periodic word. Subformulas are solved bottom-up
// over the lasso positions; Until is a least fixpoint, iterated to stability.
namespace {

struct LassoEval {
  const std::vector<Letter>& letters;
  std::size_t loop;
  std::map<const Formula*, std::vector<char>> table;

  std::size_t succ(std::size_t i) const { return i + 1 < letters.size() ? i + 1 : loop; }

  const std::vector<char>& solve(const FormulaPtr& f) {
    auto it = table.find(f.get());
    if (it != table.end()) return it->second;
    const std::size_t n = letters.size();
    std::vector<char> t(n, 0);
    switch (f->op) {
      case Op::Atom:
        for (std::size_t i = 0; i < n; ++i) t[i] = letters[i].count(f->atom_name) > 0;
        break;
      case Op::True: std::fill(t.begin(), t.end(), 1); break;
      case Op::False: break;
      case Op::Not: {
        const auto& a = solve(f->lhs);
        for (std::size_t i = 0; i < n; ++i) t[i] = !a[i];
        break;
      }
      case Op::And: {
        const auto& a = solve(f->lhs);
        const auto& b = solve(f->rhs);
        for (std::size_t i = 0; i < n; ++i) t[i] = a[i] && b[i];
        break;
      }
      case Op::Or: {
        const auto& a = solve(f->lhs);
        const auto& b = solve(f->rhs);
        for (std::size_t i = 0; i < n; ++i) t[i] = a[i] || b[i];
        break;
      }
      case Op::Implies: {
        const auto& a = solve(f->lhs);
        const auto& b = solve(f->rhs);
        for (std::size_t i = 0; i < n; ++i) t[i] = !a[i] || b[i];
        break;
      }
      case Op::Next: {
        const auto& a = solve(f->lhs);
        for (std::size_t i = 0; i < n; ++i) t[i] = a[succ(i)];
        break;
      }
      case Op::Until: {
        const auto& a = solve(f->lhs);
        const auto& b = solve(f->rhs);
        bool changed = true;
        while (changed) {
          changed = false;
          for (std::size_t k = n; k-- > 0;) {
            char v = b[k] || (a[k] && t[succ(k)]);
            if (v != t[k]) {
              t[k] = v;
              changed = true;
            }
          }
        }
        break;
      }
      case Op::Release: {
        const auto& a = solve(f->lhs);
        const auto& b = solve(f->rhs);
        std::fill(t.begin(), t.end(), 1);  // greatest fixpoint
        bool changed = true;
        while (changed) {
          changed = false;
          for (std::size_t k = n; k-- > 0;) {
            char v = b[k] && (a[k] || t[succ(k)]);
            if (v != t[k]) {
              t[k] = v;
              changed = true;
            }
          }
        }
        break;
      }
      case Op::Eventually: {
        const auto& a = solve(f->lhs);
        bool changed = true;
        while (changed) {
          changed = false;
          for (std::size_t k = n; k-- > 0;) {
            char v = a[k] || t[succ(k)];
            if (v != t[k]) {
              t[k] = v;
              changed = true;
            }
          }
        }
        break;
      }
      case Op::Always: {
        const auto& a = solve(f->lhs);
        std::fill(t.begin(), t.end(), 1);
        bool changed = true;
        while (changed) {
          changed = false;
          for (std::size_t k = n; k-- > 0;) {
            char v = a[k] && t[succ(k)];
            if (v != t[k]) {
              t[k] = v;
              changed = true;
            }
          }
        }
        break;
      }
    }
    return table.emplace(f.get(), std::move(t)).first->second;
  }
};

}  // namespace

bool eval_lasso(const FormulaPtr& f, const std::vector<Letter>& letters, std::size_t lasso_start) {
  if (letters.empty()) throw ValidationError("empty lasso word");
  if (lasso_start >= letters.size()) throw ValidationError("lasso start out of range");
  LassoEval ev{letters, lasso_start, {}};
  return ev.solve(f)[0] != 0;
}

}  // namespace specdrive
