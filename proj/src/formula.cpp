#include "ptkv/formula.hpp"

#include <algorithm>
#include <cctype>
#include <utility>

#include "ptkv/error.hpp"

namespace ptkv {

namespace {
// Reserved atom used to expand T and F into the core language.
constexpr const char* kTopAtom = "$T";
}

struct Formula::Node {
  Kind kind;
  std::string name;  // atom name
  Term t1, t2;       // Eq operands; Kv term in t1
  Agent agent;
  Rat threshold;
  std::vector<Formula> children;
  std::string text;
  std::size_t hash = 0;
};

namespace {

bool is_top_shape(const Formula& f) {
  return f.is(Kind::kImp) && f.lhs().is(Kind::kAtom) &&
         f.lhs().atom_name() == kTopAtom && f.rhs().is(Kind::kAtom) &&
         f.rhs().atom_name() == kTopAtom;
}

std::shared_ptr<Formula::Node> make_node(Kind kind) {
  auto n = std::make_shared<Formula::Node>();
  n->kind = kind;
  return n;
}

}  // namespace

Formula Formula::atom(std::string name) {
  auto n = make_node(Kind::kAtom);
  n->name = std::move(name);
  n->text = n->name;
  n->hash = std::hash<std::string>{}(n->text);
  return Formula(std::move(n));
}

Formula Formula::eq(Term lhs, Term rhs) {
  auto n = make_node(Kind::kEq);
  n->text = lhs.name + " = " + rhs.name;
  n->t1 = std::move(lhs);
  n->t2 = std::move(rhs);
  n->hash = std::hash<std::string>{}(n->text);
  return Formula(std::move(n));
}

Formula Formula::neg(Formula f) {
  auto n = make_node(Kind::kNot);
  n->text = is_top_shape(f) ? "F" : "~" + f.text();
  n->children.push_back(std::move(f));
  n->hash = std::hash<std::string>{}(n->text);
  return Formula(std::move(n));
}

Formula Formula::imp(Formula lhs, Formula rhs) {
  auto n = make_node(Kind::kImp);
  n->text = "(" + lhs.text() + " -> " + rhs.text() + ")";
  n->children.push_back(std::move(lhs));
  n->children.push_back(std::move(rhs));
  Formula f(n);
  if (is_top_shape(f)) n->text = "T";
  n->hash = std::hash<std::string>{}(n->text);
  return f;
}

Formula Formula::k(Agent agent, Rat theta, Formula f) {
  if (!is_unit_interval(theta)) {
    throw Error(Errc::kThresholdOutOfRange,
                "K threshold " + rat_to_string(theta) + " outside [0,1]");
  }
  if (agent.index < 1) throw Error(Errc::kInvalidArgument, "agent index < 1");
  auto n = make_node(Kind::kK);
  n->text = "K_" + std::to_string(agent.index) + "^{" + rat_to_string(theta) +
            "}" + f.text();
  n->agent = agent;
  n->threshold = std::move(theta);
  n->children.push_back(std::move(f));
  n->hash = std::hash<std::string>{}(n->text);
  return Formula(std::move(n));
}

Formula Formula::kv(Agent agent, Rat eta, Term t) {
  if (!is_high_threshold(eta)) {
    throw Error(Errc::kThresholdOutOfRange,
                "Kv threshold " + rat_to_string(eta) + " outside (1/2,1]");
  }
  if (agent.index < 1) throw Error(Errc::kInvalidArgument, "agent index < 1");
  auto n = make_node(Kind::kKv);
  n->text = "Kv_" + std::to_string(agent.index) + "^{" + rat_to_string(eta) +
            "}(" + t.name + ")";
  n->agent = agent;
  n->threshold = std::move(eta);
  n->t1 = std::move(t);
  n->hash = std::hash<std::string>{}(n->text);
  return Formula(std::move(n));
}

Formula Formula::conj(Formula a, Formula b) {
  return neg(imp(std::move(a), neg(std::move(b))));
}

Formula Formula::disj(Formula a, Formula b) {
  return imp(neg(std::move(a)), std::move(b));
}

Formula Formula::iff(Formula a, Formula b) {
  return neg(imp(imp(a, b), neg(imp(b, a))));
}

Formula Formula::top() { return imp(atom(kTopAtom), atom(kTopAtom)); }

Formula Formula::bottom() { return neg(top()); }

Formula Formula::conj_all(const std::vector<Formula>& parts) {
  if (parts.empty()) return top();
  Formula acc = parts.back();
  for (auto it = parts.rbegin() + 1; it != parts.rend(); ++it) {
    acc = conj(*it, acc);
  }
  return acc;
}

Kind Formula::kind() const { return node_->kind; }
const std::string& Formula::atom_name() const { return node_->name; }
const Term& Formula::lhs_term() const { return node_->t1; }
const Term& Formula::rhs_term() const { return node_->t2; }
const Term& Formula::term() const { return node_->t1; }
Agent Formula::agent() const { return node_->agent; }
const Rat& Formula::threshold() const { return node_->threshold; }
const Formula& Formula::sub() const { return node_->children.at(0); }
const Formula& Formula::lhs() const { return node_->children.at(0); }
const Formula& Formula::rhs() const { return node_->children.at(1); }
const std::string& Formula::text() const { return node_->text; }
std::size_t Formula::hash() const { return node_->hash; }

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  Formula run() {
    Formula f = formula();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(Errc::kSyntax,
                "syntax error at offset " + std::to_string(pos_) + ": " + what,
                pos_);
  }

  void skip_ws() {
    while (pos_ < s_.size() &&
           std::isspace(static_cast<unsigned char>(s_[pos_]))) {
      ++pos_;
    }
  }

  bool starts_with(std::string_view p) const {
    return s_.substr(pos_, p.size()) == p;
  }

  bool digit_at(std::size_t i) const {
    return i < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i]));
  }

  void expect(std::string_view tok) {
    skip_ws();
    if (!starts_with(tok)) fail("expected '" + std::string(tok) + "'");
    pos_ += tok.size();
  }

  static bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }
  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  }

  std::string ident() {
    skip_ws();
    if (pos_ >= s_.size() || !ident_start(s_[pos_])) fail("expected identifier");
    std::size_t start = pos_;
    while (pos_ < s_.size() && ident_char(s_[pos_])) ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }

  Term term() {
    std::size_t at = pos_;
    std::string name = ident();
    if (name == "T" || name == "F") {
      pos_ = at;
      fail("'" + name + "' is reserved and cannot name a term");
    }
    return Term{std::move(name)};
  }

  unsigned agent_index() {
    std::size_t start = pos_;
    while (digit_at(pos_)) ++pos_;
    if (start == pos_) fail("expected agent index");
    unsigned long v = std::stoul(std::string(s_.substr(start, pos_ - start)));
    if (v < 1) {
      pos_ = start;
      fail("agent index must be >= 1");
    }
    return static_cast<unsigned>(v);
  }

  Rat threshold() {
    expect("^{");
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) ||
                                s_[pos_] == '/' || s_[pos_] == '.')) {
      ++pos_;
    }
    if (start == pos_) fail("expected rational threshold");
    std::string_view lit = s_.substr(start, pos_ - start);
    expect("}");
    try {
      return parse_rat(lit);
    } catch (const Error& e) {
      throw Error(e.code(), e.what(), start);
    }
  }

  // Wraps modal construction so threshold range errors carry a position.
  template <typename Make>
  Formula build_at(std::size_t at, Make make) {
    try {
      return make();
    } catch (const Error& e) {
      throw Error(e.code(), e.what(), at);
    }
  }

  Formula formula() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    std::size_t at = pos_;
    char c = s_[pos_];
    if (c == '~') {
      ++pos_;
      return Formula::neg(formula());
    }
    if (c == '(') {
      ++pos_;
      Formula lhs = formula();
      skip_ws();
      if (starts_with(")")) {
        ++pos_;
        return lhs;
      }
      enum class Op { kImp, kAnd, kOr, kIff } op;
      if (starts_with("->")) {
        op = Op::kImp;
        pos_ += 2;
      } else if (starts_with("<->")) {
        op = Op::kIff;
        pos_ += 3;
      } else if (starts_with("&")) {
        op = Op::kAnd;
        pos_ += 1;
      } else if (starts_with("|")) {
        op = Op::kOr;
        pos_ += 1;
      } else {
        fail("expected '->', '&', '|', '<->' or ')'");
      }
      Formula rhs = formula();
      expect(")");
      switch (op) {
        case Op::kImp: return Formula::imp(lhs, rhs);
        case Op::kAnd: return Formula::conj(lhs, rhs);
        case Op::kOr: return Formula::disj(lhs, rhs);
        case Op::kIff: return Formula::iff(lhs, rhs);
      }
    }
    if (starts_with("Kv_") && digit_at(pos_ + 3)) {
      pos_ += 3;
      Agent agent{agent_index()};
      Rat eta = threshold();
      expect("(");
      skip_ws();
      Term t = term();
      expect(")");
      return build_at(at, [&] { return Formula::kv(agent, eta, t); });
    }
    if (starts_with("K_") && digit_at(pos_ + 2)) {
      pos_ += 2;
      Agent agent{agent_index()};
      Rat theta = threshold();
      Formula body = formula();
      return build_at(at, [&] { return Formula::k(agent, theta, body); });
    }
    if (starts_with(kTopAtom)) {
      pos_ += 2;
      return Formula::atom(kTopAtom);
    }
    std::string name = ident();
    std::size_t after = pos_;
    skip_ws();
    bool is_eq = pos_ < s_.size() && s_[pos_] == '=';
    if (!is_eq) pos_ = after;
    if (name == "T" || name == "F") {
      if (is_eq) {
        pos_ = at;
        fail("'" + name + "' is reserved and cannot name a term");
      }
      return name == "T" ? Formula::top() : Formula::bottom();
    }
    if (is_eq) {
      ++pos_;
      Term rhs = term();
      return Formula::eq(Term{std::move(name)}, std::move(rhs));
    }
    return Formula::atom(std::move(name));
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

Formula parse(std::string_view text) { return Parser(text).run(); }

std::size_t modal_depth(const Formula& f) {
  switch (f.kind()) {
    case Kind::kAtom:
    case Kind::kEq: return 0;
    case Kind::kNot: return modal_depth(f.sub());
    case Kind::kImp: return std::max(modal_depth(f.lhs()), modal_depth(f.rhs()));
    case Kind::kK: return modal_depth(f.sub()) + 1;
    case Kind::kKv: return 1;
  }
  return 0;
}

void walk(const Formula& f, const std::function<void(const Formula&)>& visit) {
  visit(f);
  switch (f.kind()) {
    case Kind::kNot:
    case Kind::kK: walk(f.sub(), visit); break;
    case Kind::kImp:
      walk(f.lhs(), visit);
      walk(f.rhs(), visit);
      break;
    default: break;
  }
}

std::set<Formula> subformulas(const Formula& f) {
  std::set<Formula> out;
  walk(f, [&](const Formula& g) { out.insert(g); });
  return out;
}

std::set<Term> terms_of(const Formula& f) {
  std::set<Term> out;
  walk(f, [&](const Formula& g) {
    if (g.is(Kind::kEq)) {
      out.insert(g.lhs_term());
      out.insert(g.rhs_term());
    } else if (g.is(Kind::kKv)) {
      out.insert(g.term());
    }
  });
  return out;
}

std::set<std::string> atoms_of(const Formula& f) {
  std::set<std::string> out;
  walk(f, [&](const Formula& g) {
    if (g.is(Kind::kAtom)) out.insert(g.atom_name());
  });
  return out;
}

std::set<Agent> agents_of(const Formula& f) {
  std::set<Agent> out;
  walk(f, [&](const Formula& g) {
    if (g.is(Kind::kK) || g.is(Kind::kKv)) out.insert(g.agent());
  });
  return out;
}

std::set<Rat> thresholds_of(const Formula& f) {
  std::set<Rat> out;
  walk(f, [&](const Formula& g) {
    if (g.is(Kind::kK) || g.is(Kind::kKv)) out.insert(g.threshold());
  });
  return out;
}

}  // namespace ptkv
