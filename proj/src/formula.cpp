#include "ktopos/formula.hpp"

#include <cctype>
#include <functional>
#include <mutex>

#include "ktopos/errors.hpp"

namespace ktopos {

namespace {

std::size_t mix(std::size_t h, std::size_t v) { return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)); }

}  // namespace

Formula::Formula() : Formula(bottom()) {}

Formula Formula::bottom() {
  static const Formula b(std::make_shared<const Node>(Node{Kind::Bottom, "", {}, 0x1234}));
  return b;
}

Formula Formula::top() {
  static const Formula t(std::make_shared<const Node>(Node{Kind::Top, "", {}, 0x5678}));
  return t;
}

Formula Formula::var(std::string name) {
  std::size_t h = mix(0x9abc, std::hash<std::string>{}(name));
  return Formula(std::make_shared<const Node>(Node{Kind::Var, std::move(name), {}, h}));
}

Formula Formula::binary(Kind k, Formula a, Formula b) {
  std::size_t h = mix(mix(static_cast<std::size_t>(k) * 7919, a.hash()), b.hash());
  return Formula(std::make_shared<const Node>(Node{k, "", {std::move(a), std::move(b)}, h}));
}

Formula Formula::conj(Formula a, Formula b) { return binary(Kind::And, std::move(a), std::move(b)); }
Formula Formula::disj(Formula a, Formula b) { return binary(Kind::Or, std::move(a), std::move(b)); }
Formula Formula::implies(Formula a, Formula b) { return binary(Kind::Implies, std::move(a), std::move(b)); }

bool operator==(const Formula& a, const Formula& b) {
  if (a.n_ == b.n_) return true;
  if (a.hash() != b.hash() || a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Kind::Bottom:
    case Kind::Top:
      return true;
    case Kind::Var:
      return a.name() == b.name();
    default:
      return a.left() == b.left() && a.right() == b.right();
  }
}

bool operator<(const Formula& a, const Formula& b) {
  if (a.n_ == b.n_) return false;
  if (a.kind() != b.kind()) return a.kind() < b.kind();
  switch (a.kind()) {
    case Kind::Bottom:
    case Kind::Top:
      return false;
    case Kind::Var:
      return a.name() < b.name();
    default:
      if (!(a.left() == b.left())) return a.left() < b.left();
      return a.right() < b.right();
  }
}

// ---------------------------------------------------------------- parsing

namespace {

enum class Tok { Not, And, Or, Imp, LParen, RParen, Ident, True, False, End };

struct Token {
  Tok tok;
  std::string text;
  std::size_t pos;
};

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto starts = [&](std::string_view w) { return s.substr(i, w.size()) == w; };
  while (i < s.size()) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    const std::size_t at = i;
    if (c == '~' || c == '!') {
      out.push_back({Tok::Not, "~", at});
      ++i;
    } else if (c == '&') {
      out.push_back({Tok::And, "&", at});
      ++i;
    } else if (c == '|') {
      out.push_back({Tok::Or, "|", at});
      ++i;
    } else if (c == '(') {
      out.push_back({Tok::LParen, "(", at});
      ++i;
    } else if (c == ')') {
      out.push_back({Tok::RParen, ")", at});
      ++i;
    } else if (starts("->")) {
      out.push_back({Tok::Imp, "->", at});
      i += 2;
    } else if (starts("¬")) {
      out.push_back({Tok::Not, "~", at});
      i += std::string_view("¬").size();
    } else if (starts("∧")) {
      out.push_back({Tok::And, "&", at});
      i += std::string_view("∧").size();
    } else if (starts("∨")) {
      out.push_back({Tok::Or, "|", at});
      i += std::string_view("∨").size();
    } else if (starts("→")) {
      out.push_back({Tok::Imp, "->", at});
      i += std::string_view("→").size();
    } else if (starts("⊥")) {
      out.push_back({Tok::False, "false", at});
      i += std::string_view("⊥").size();
    } else if (starts("⊤")) {
      out.push_back({Tok::True, "true", at});
      i += std::string_view("⊤").size();
    } else if (std::isalpha(c)) {
      std::size_t j = i + 1;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      std::string word(s.substr(i, j - i));
      Tok t = word == "true" ? Tok::True : word == "false" ? Tok::False : Tok::Ident;
      out.push_back({t, std::move(word), at});
      i = j;
    } else {
      throw SyntaxError(std::string("unexpected character '") + s[i] + "'", at);
    }
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Formula parse_all() {
    Formula f = implication();
    if (peek().tok != Tok::End) throw SyntaxError("unexpected '" + peek().text + "'", peek().pos);
    return f;
  }

 private:
  const Token& peek() const { return toks_[i_]; }
  bool accept(Tok t) {
    if (peek().tok != t) return false;
    ++i_;
    return true;
  }

  Formula implication() {
    Formula lhs = disjunction();
    if (accept(Tok::Imp)) return Formula::implies(lhs, implication());
    return lhs;
  }
  Formula disjunction() {
    Formula f = conjunction();
    while (accept(Tok::Or)) f = Formula::disj(f, conjunction());
    return f;
  }
  Formula conjunction() {
    Formula f = unary();
    while (accept(Tok::And)) f = Formula::conj(f, unary());
    return f;
  }
  Formula unary() {
    if (accept(Tok::Not)) return Formula::negation(unary());
    return atom();
  }
  Formula atom() {
    const Token& t = peek();
    switch (t.tok) {
      case Tok::True:
        ++i_;
        return Formula::top();
      case Tok::False:
        ++i_;
        return Formula::bottom();
      case Tok::Ident:
        ++i_;
        return Formula::var(t.text);
      case Tok::LParen: {
        ++i_;
        Formula f = implication();
        if (!accept(Tok::RParen)) throw SyntaxError("expected ')'", peek().pos);
        return f;
      }
      case Tok::End:
        throw SyntaxError("unexpected end of input", t.pos);
      default:
        throw SyntaxError("unexpected '" + t.text + "'", t.pos);
    }
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

// Precedence levels for printing.
int level(const Formula& f) {
  if (f.is_negation()) return 4;
  switch (f.kind()) {
    case Kind::Implies:
      return 1;
    case Kind::Or:
      return 2;
    case Kind::And:
      return 3;
    default:
      return 5;
  }
}

void print_to(const Formula& f, int min_level, std::string& out) {
  const int lv = level(f);
  const bool paren = lv < min_level;
  if (paren) out += '(';
  if (f.is_negation()) {
    out += '~';
    print_to(f.left(), 4, out);
  } else {
    switch (f.kind()) {
      case Kind::Bottom:
        out += "false";
        break;
      case Kind::Top:
        out += "true";
        break;
      case Kind::Var:
        out += f.name();
        break;
      case Kind::And:
        print_to(f.left(), 3, out);
        out += " & ";
        print_to(f.right(), 4, out);
        break;
      case Kind::Or:
        print_to(f.left(), 2, out);
        out += " | ";
        print_to(f.right(), 3, out);
        break;
      case Kind::Implies:
        print_to(f.left(), 2, out);
        out += " -> ";
        print_to(f.right(), 1, out);
        break;
    }
  }
  if (paren) out += ')';
}

}  // namespace

Formula parse(std::string_view text) { return Parser(lex(text)).parse_all(); }

std::string print(const Formula& f) {
  std::string out;
  print_to(f, 0, out);
  return out;
}

Formula substitute(const Formula& f, const std::string& var, const Formula& by) {
  switch (f.kind()) {
    case Kind::Var:
      return f.name() == var ? by : f;
    case Kind::Bottom:
    case Kind::Top:
      return f;
    case Kind::And:
      return Formula::conj(substitute(f.left(), var, by), substitute(f.right(), var, by));
    case Kind::Or:
      return Formula::disj(substitute(f.left(), var, by), substitute(f.right(), var, by));
    case Kind::Implies:
      return Formula::implies(substitute(f.left(), var, by), substitute(f.right(), var, by));
  }
  return f;
}

std::size_t size(const Formula& f) {
  if (f.is_negation()) return 1 + size(f.left());
  if (f.binary()) return 1 + size(f.left()) + size(f.right());
  return 1;
}

std::set<std::string> variables(const Formula& f) {
  std::set<std::string> out;
  std::function<void(const Formula&)> walk = [&](const Formula& g) {
    if (g.kind() == Kind::Var) out.insert(g.name());
    if (g.binary()) {
      walk(g.left());
      walk(g.right());
    }
  };
  walk(f);
  return out;
}

const std::vector<Formula>& formulas_of_size(const std::vector<std::string>& vars, std::size_t n) {
  static std::mutex mu;
  static std::map<std::pair<std::vector<std::string>, std::size_t>, std::vector<Formula>> cache;
  {
    std::lock_guard lock(mu);
    auto it = cache.find({vars, n});
    if (it != cache.end()) return it->second;
  }
  std::vector<Formula> out;
  if (n == 1) {
    out.push_back(Formula::bottom());
    out.push_back(Formula::top());
    for (const auto& v : vars) out.push_back(Formula::var(v));
  } else if (n >= 2) {
    for (const auto& a : formulas_of_size(vars, n - 1)) out.push_back(Formula::negation(a));
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const auto& ls = formulas_of_size(vars, i);
      const auto& rs = formulas_of_size(vars, n - 1 - i);
      for (const auto& a : ls) {
        for (const auto& b : rs) {
          out.push_back(Formula::conj(a, b));
          out.push_back(Formula::disj(a, b));
          if (b.kind() != Kind::Bottom) out.push_back(Formula::implies(a, b));
        }
      }
    }
  }
  std::lock_guard lock(mu);
  return cache.emplace(std::make_pair(vars, n), std::move(out)).first->second;
}

std::vector<Formula> formulas_up_to(const std::vector<std::string>& vars, std::size_t max_size) {
  std::vector<Formula> out;
  for (std::size_t n = 1; n <= max_size; ++n) {
    const auto& layer = formulas_of_size(vars, n);
    out.insert(out.end(), layer.begin(), layer.end());
  }
  return out;
}

KripkeModel::KripkeModel(FinPoset frame, std::map<std::string, Upset> valuation)
    : frame_(std::move(frame)), valuation_(std::move(valuation)) {
  for (const auto& [name, u] : valuation_) {
    if ((u.members & ~frame_.all()) != 0 || !frame_.is_upset(u.members)) {
      throw NotUpsetError("value of '" + name + "' is not an upset of the frame");
    }
  }
}

Mask evaluate_upsets(const FinPoset& p, const Formula& f, const std::map<std::string, Mask>& v) {
  switch (f.kind()) {
    case Kind::Bottom:
      return 0;
    case Kind::Top:
      return p.all();
    case Kind::Var: {
      auto it = v.find(f.name());
      if (it == v.end()) throw UnboundVariableError("variable '" + f.name() + "' has no value");
      return it->second;
    }
    case Kind::And:
      return evaluate_upsets(p, f.left(), v) & evaluate_upsets(p, f.right(), v);
    case Kind::Or:
      return evaluate_upsets(p, f.left(), v) | evaluate_upsets(p, f.right(), v);
    case Kind::Implies:
      return heyting_implies(p, evaluate_upsets(p, f.left(), v), evaluate_upsets(p, f.right(), v)).members;
  }
  return 0;
}

Mask truth_set(const KripkeModel& m, const Formula& f) {
  std::map<std::string, Mask> v;
  for (const auto& [name, u] : m.valuation()) v.emplace(name, u.members);
  return evaluate_upsets(m.frame(), f, v);
}

bool force(const KripkeModel& m, std::size_t point, const Formula& f) {
  if (point >= m.frame().size()) throw UnknownElementError("point " + std::to_string(point) + " is not in the frame");
  return (truth_set(m, f) & bit(point)) != 0;
}

std::vector<std::map<std::string, Upset>> all_valuations(const FinPoset& p, const std::vector<std::string>& vars) {
  const auto ups = all_upsets(p);
  std::vector<std::map<std::string, Upset>> out;
  std::vector<std::size_t> idx(vars.size(), 0);
  while (true) {
    std::map<std::string, Upset> v;
    for (std::size_t k = 0; k < vars.size(); ++k) v.emplace(vars[k], ups[idx[k]]);
    out.push_back(std::move(v));
    std::size_t k = vars.size();
    while (k > 0) {
      --k;
      if (++idx[k] < ups.size()) break;
      idx[k] = 0;
      if (k == 0) return out;
    }
    if (vars.empty()) return out;
  }
}

}  // namespace ktopos
