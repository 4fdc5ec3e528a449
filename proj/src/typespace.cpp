#include "ptkv/typespace.hpp"

#include <algorithm>
#include <functional>
#include <limits>

#include "ptkv/error.hpp"

namespace ptkv::ts {

std::size_t Type::class_count() const {
  if (term_class.empty()) return 0;
  return static_cast<std::size_t>(*std::max_element(term_class.begin(), term_class.end())) + 1;
}

Rat FcSolution::total() const {
  Rat sum = 0;
  for (const auto& [key, z] : masses) sum += z;
  return sum;
}

namespace {

// Closure members with child links resolved to closure indices.
struct Node {
  Kind kind;
  std::size_t a = 0, b = 0;  // children, or term indices for kEq
};

std::vector<Node> link(const Closure& sigma) {
  std::vector<Node> out;
  out.reserve(sigma.size());
  for (const Formula& f : sigma.formulas()) {
    Node n{f.kind()};
    switch (f.kind()) {
      case Kind::kNot: n.a = *sigma.index_of(f.sub()); break;
      case Kind::kImp:
        n.a = *sigma.index_of(f.lhs());
        n.b = *sigma.index_of(f.rhs());
        break;
      case Kind::kEq:
        n.a = *sigma.term_index(f.lhs_term());
        n.b = *sigma.term_index(f.rhs_term());
        break;
      default: break;
    }
    out.push_back(n);
  }
  return out;
}

// Children before parents: a proper subformula always prints shorter.
std::vector<std::size_t> bottom_up(const Closure& sigma) {
  std::vector<std::size_t> order(sigma.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return sigma.formulas()[x].text().size() < sigma.formulas()[y].text().size();
  });
  return order;
}

void for_each_rgs(std::size_t n, std::size_t max_blocks,
                  const std::function<void(const std::vector<std::uint8_t>&)>& fn) {
  std::vector<std::uint8_t> cur(n, 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t used) {
    if (pos == n) {
      fn(cur);
      return;
    }
    for (std::size_t v = 0; v <= used && v < max_blocks; ++v) {
      cur[pos] = static_cast<std::uint8_t>(v);
      rec(pos + 1, std::max(used, v + 1));
    }
  };
  if (n == 0) {
    fn(cur);
    return;
  }
  rec(0, 0);
}

// Pairwise literal constraints among free core members (atoms, K, Kv).
struct Constraints {
  std::vector<bool> forced;                                    // KZero
  std::vector<std::pair<std::size_t, std::size_t>> implies;    // x -> y
  std::vector<std::pair<std::size_t, std::size_t>> excludes;   // ~(x & y)
};

bool is_negation_of(const Formula& f, const Formula& g) {
  return f.is(Kind::kNot) && f.sub() == g;
}

// Indices are closure indices.
Constraints literal_constraints(const Closure& sigma) {
  const auto& fs = sigma.formulas();
  Constraints c;
  c.forced.assign(fs.size(), false);
  for (std::size_t x = 0; x < fs.size(); ++x) {
    const Formula& f = fs[x];
    if (f.is(Kind::kK) && f.threshold() == 0) c.forced[x] = true;
    for (std::size_t y = 0; y < fs.size(); ++y) {
      if (x == y) continue;
      const Formula& g = fs[y];
      if (f.kind() != g.kind()) continue;
      if ((f.is(Kind::kK) || f.is(Kind::kKv)) && f.agent() != g.agent()) continue;
      if (f.is(Kind::kK)) {
        if (f.sub() == g.sub() && f.threshold() > g.threshold()) c.implies.emplace_back(x, y);
        if (x < y && f.threshold() + g.threshold() > 1 &&
            (is_negation_of(f.sub(), g.sub()) || is_negation_of(g.sub(), f.sub()))) {
          c.excludes.emplace_back(x, y);
        }
      } else if (f.is(Kind::kKv)) {
        if (f.term() == g.term() && f.threshold() > g.threshold()) c.implies.emplace_back(x, y);
      }
    }
  }
  return c;
}

// Truth of every closure member from the free members and a partition.
void evaluate(const std::vector<Node>& nodes, const std::vector<std::size_t>& order,
              const std::vector<std::uint8_t>& classes, std::vector<bool>& truth) {
  for (std::size_t i : order) {
    const Node& n = nodes[i];
    switch (n.kind) {
      case Kind::kEq: truth[i] = classes[n.a] == classes[n.b]; break;
      case Kind::kNot: truth[i] = !truth[n.a]; break;
      case Kind::kImp: truth[i] = !truth[n.a] || truth[n.b]; break;
      default: break;
    }
  }
}

std::uint64_t bell(std::size_t n) {
  std::vector<std::vector<std::uint64_t>> tri{{1}};
  for (std::size_t i = 1; i <= n; ++i) {
    std::vector<std::uint64_t> row{tri.back().back()};
    for (std::size_t j = 0; j < i; ++j) row.push_back(row[j] + tri.back()[j]);
    tri.push_back(std::move(row));
  }
  return tri[n][0];
}

}  // namespace

std::vector<Type> enumerate_types(const Closure& sigma, const EnumerateOptions& opts) {
  if (sigma.core_size() > opts.closure_cap) {
    throw Error(Errc::kClosureTooLarge,
                "closure has " + std::to_string(sigma.core_size()) +
                    " core formulas, cap is " + std::to_string(opts.closure_cap));
  }
  const auto& fs = sigma.formulas();
  std::vector<std::size_t> free;
  for (std::size_t i : sigma.core()) {
    Kind k = fs[i].kind();
    if (k == Kind::kAtom || k == Kind::kK || k == Kind::kKv) free.push_back(i);
  }
  const std::uint64_t partitions = bell(sigma.terms().size());
  if (free.size() >= 40 ||
      (std::uint64_t{1} << free.size()) > opts.candidate_cap / partitions) {
    throw Error(Errc::kClosureTooLarge,
                "type candidates exceed cap of " + std::to_string(opts.candidate_cap));
  }

  const std::vector<Node> nodes = link(sigma);
  const std::vector<std::size_t> order = bottom_up(sigma);
  const Constraints cons = literal_constraints(sigma);

  // Constraints checked when the later of the two free members is assigned.
  std::vector<std::size_t> pos(fs.size(), std::numeric_limits<std::size_t>::max());
  for (std::size_t j = 0; j < free.size(); ++j) pos[free[j]] = j;
  std::vector<std::vector<std::function<bool(const std::vector<bool>&)>>> checks(free.size());
  for (auto [x, y] : cons.implies) {
    std::size_t later = std::max(pos[x], pos[y]);
    checks[later].push_back([x, y](const std::vector<bool>& t) { return !t[x] || t[y]; });
  }
  for (auto [x, y] : cons.excludes) {
    std::size_t later = std::max(pos[x], pos[y]);
    checks[later].push_back([x, y](const std::vector<bool>& t) { return !(t[x] && t[y]); });
  }

  std::vector<Type> out;
  std::vector<bool> truth(fs.size(), false);
  for_each_rgs(sigma.terms().size(), sigma.terms().size(),
               [&](const std::vector<std::uint8_t>& classes) {
    std::function<void(std::size_t)> rec = [&](std::size_t j) {
      if (j == free.size()) {
        evaluate(nodes, order, classes, truth);
        out.push_back(Type{truth, classes});
        return;
      }
      for (bool v : {false, true}) {
        if (!v && cons.forced[free[j]]) continue;
        truth[free[j]] = v;
        bool ok = true;
        for (const auto& check : checks[j]) {
          if (!check(truth)) {
            ok = false;
            break;
          }
        }
        if (ok) rec(j + 1);
      }
      truth[free[j]] = false;
    };
    rec(0);
  });
  std::sort(out.begin(), out.end());
  return out;
}

bool is_coherent(const Closure& sigma, const std::vector<bool>& members) {
  const auto& fs = sigma.formulas();
  if (members.size() != fs.size()) return false;
  // Saturation.
  for (std::size_t i : sigma.core()) {
    if (members[i] == members[sigma.negation_of(i)]) return false;
  }
  // Boolean skeleton.
  const std::vector<Node> nodes = link(sigma);
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const Node& n = nodes[i];
    if (n.kind == Kind::kNot && members[i] == members[n.a]) return false;
    if (n.kind == Kind::kImp && members[i] != (!members[n.a] || members[n.b])) return false;
  }
  // Equality: reflexive, symmetric, transitive over the closure's terms.
  const std::size_t nt = sigma.terms().size();
  auto eq = [&](std::size_t a, std::size_t b) {
    return members[*sigma.index_of(Formula::eq(sigma.terms()[a], sigma.terms()[b]))];
  };
  for (std::size_t a = 0; a < nt; ++a) {
    if (!eq(a, a)) return false;
    for (std::size_t b = 0; b < nt; ++b) {
      if (eq(a, b) != eq(b, a)) return false;
      for (std::size_t c = 0; c < nt; ++c) {
        if (eq(a, b) && eq(b, c) && !eq(a, c)) return false;
      }
    }
  }
  const Constraints cons = literal_constraints(sigma);
  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (cons.forced[i] && !members[i]) return false;
  }
  for (auto [x, y] : cons.implies) {
    if (members[x] && !members[y]) return false;
  }
  for (auto [x, y] : cons.excludes) {
    if (members[x] && members[y]) return false;
  }
  return true;
}

std::vector<Assignment> config_space(const Type& delta, std::size_t k_size) {
  const std::size_t c = delta.class_count();
  if (k_size < c) {
    throw Error(Errc::kTooFewCoordinates,
                std::to_string(k_size) + " coordinates for " + std::to_string(c) +
                    " equality classes");
  }
  if (k_size > std::numeric_limits<std::uint8_t>::max()) {
    throw Error(Errc::kInvalidArgument, "at most 255 coordinates are supported");
  }
  std::vector<Assignment> out;
  std::vector<std::uint8_t> g(c, 0);
  std::vector<bool> used(k_size, false);
  std::function<void(std::size_t)> rec = [&](std::size_t j) {
    if (j == c) {
      Assignment f(delta.term_class.size());
      for (std::size_t t = 0; t < f.size(); ++t) f[t] = g[delta.term_class[t]];
      out.push_back(std::move(f));
      return;
    }
    for (std::size_t k = 0; k < k_size; ++k) {
      if (used[k]) continue;
      used[k] = true;
      g[j] = static_cast<std::uint8_t>(k);
      rec(j + 1);
      used[k] = false;
    }
  };
  rec(0);
  return out;
}

ModalProfile modal_profile(const Closure& sigma, const Type& gamma, Agent agent) {
  ModalProfile p;
  const auto& fs = sigma.formulas();
  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (!gamma.has(i)) continue;
    const Formula& g = fs[i].is(Kind::kNot) ? fs[i].sub() : fs[i];
    if ((g.is(Kind::kK) || g.is(Kind::kKv)) && g.agent() == agent) p.literals.push_back(i);
  }
  return p;
}

namespace {

struct Literal {
  Kind kind;         // kK or kKv
  bool negated;
  std::size_t ref;   // body closure index (kK) or term index (kKv)
  Rat threshold;
};

std::vector<Literal> decode(const Closure& sigma, const ModalProfile& profile) {
  std::vector<Literal> out;
  for (std::size_t i : profile.literals) {
    const Formula& f = sigma.formulas().at(i);
    const bool negated = f.is(Kind::kNot);
    const Formula& g = negated ? f.sub() : f;
    if (g.is(Kind::kK)) {
      out.push_back({Kind::kK, negated, *sigma.index_of(g.sub()), g.threshold()});
    } else {
      out.push_back({Kind::kKv, negated, *sigma.term_index(g.term()), g.threshold()});
    }
  }
  return out;
}

using Coeffs = std::vector<std::pair<std::size_t, Rat>>;

// Rows shared by every disjunct; `column` describes variable j by its type
// and assignment.
template <typename Column>
lp::LinearSystem base_system(const std::vector<Literal>& lits, std::size_t k_size,
                             std::vector<std::string> names, const Column& column) {
  lp::LinearSystem sys;
  sys.variables = std::move(names);
  const std::size_t n = sys.variables.size();
  Coeffs all;
  for (std::size_t j = 0; j < n; ++j) all.emplace_back(j, Rat(1));
  sys.add_row(all, lp::Relation::kEQ, Rat(1));
  for (const Literal& l : lits) {
    if (l.kind == Kind::kK) {
      Coeffs c;
      for (std::size_t j = 0; j < n; ++j) {
        if (column(j).first->has(l.ref)) c.emplace_back(j, Rat(l.negated ? -1 : 1));
      }
      if (l.negated) sys.add_row(std::move(c), lp::Relation::kGT, Rat(-l.threshold));
      else sys.add_row(std::move(c), lp::Relation::kGE, l.threshold);
    } else if (l.negated) {
      for (std::size_t k = 0; k < k_size; ++k) {
        Coeffs c;
        for (std::size_t j = 0; j < n; ++j) {
          if ((*column(j).second)[l.ref] == k) c.emplace_back(j, Rat(-1));
        }
        sys.add_row(std::move(c), lp::Relation::kGT, Rat(-l.threshold));
      }
    }
  }
  return sys;
}

template <typename Column>
void add_witness_rows(lp::LinearSystem& sys, const std::vector<Literal>& pos,
                      const std::vector<std::size_t>& ks, const Column& column) {
  for (std::size_t m = 0; m < pos.size(); ++m) {
    Coeffs c;
    for (std::size_t j = 0; j < sys.variables.size(); ++j) {
      if ((*column(j).second)[pos[m].ref] == ks[m]) c.emplace_back(j, Rat(1));
    }
    sys.add_row(std::move(c), lp::Relation::kGE, pos[m].threshold);
  }
}

std::vector<Literal> positive_kv(const std::vector<Literal>& lits) {
  std::vector<Literal> out;
  for (const Literal& l : lits) {
    if (l.kind == Kind::kKv && !l.negated) out.push_back(l);
  }
  return out;
}

std::string var_name(std::size_t d, const Assignment& f) {
  std::string s = "z[" + std::to_string(d);
  if (!f.empty()) s += ";" + assignment_label(f);
  return s + "]";
}

// S with precomputed assignment spaces.
struct Candidates {
  std::vector<const Type*> types;
  std::vector<const std::vector<Assignment>*> configs;
};

FcOutcome solve_reduced(const Closure& sigma, const ModalProfile& profile,
                        const Candidates& s, std::size_t k_size) {
  const std::vector<Literal> lits = decode(sigma, profile);
  const std::vector<Literal> pos = positive_kv(lits);

  std::vector<std::size_t> bodies, terms;
  for (const Literal& l : lits) {
    (l.kind == Kind::kK ? bodies : terms).push_back(l.ref);
  }
  std::sort(terms.begin(), terms.end());
  terms.erase(std::unique(terms.begin(), terms.end()), terms.end());

  // Columns with the same membership on K bodies and the same coordinates on
  // Kv terms meet every row identically; keep the first of each class.
  std::map<std::vector<std::uint8_t>, std::size_t> seen;
  std::vector<std::pair<std::size_t, std::size_t>> reps;
  for (std::size_t d = 0; d < s.types.size(); ++d) {
    const auto& fs = *s.configs[d];
    for (std::size_t fi = 0; fi < fs.size(); ++fi) {
      std::vector<std::uint8_t> sig;
      sig.reserve(bodies.size() + terms.size());
      for (std::size_t b : bodies) sig.push_back(s.types[d]->has(b) ? 1 : 0);
      for (std::size_t t : terms) sig.push_back(fs[fi][t]);
      if (seen.emplace(std::move(sig), reps.size()).second) reps.emplace_back(d, fi);
    }
  }
  std::vector<std::string> names;
  for (auto [d, fi] : reps) names.push_back(var_name(d, (*s.configs[d])[fi]));
  auto column = [&](std::size_t j) {
    return std::make_pair(s.types[reps[j].first], &(*s.configs[reps[j].first])[reps[j].second]);
  };
  const lp::LinearSystem base = base_system(lits, k_size, std::move(names), column);

  FcOutcome out;
  // Witness tuples up to relabelling of coordinates: restricted growth
  // strings, which also enumerate the lexicographically first member of
  // each orbit in order.
  std::vector<std::size_t> ks(pos.size(), 0);
  std::function<bool(std::size_t, std::size_t)> rec = [&](std::size_t m, std::size_t used) {
    if (m == pos.size()) {
      lp::LinearSystem sys = base;
      add_witness_rows(sys, pos, ks, column);
      ++out.disjuncts_tried;
      lp::MixedResult r = lp::solve_mixed(sys);
      out.systems.push_back(std::move(sys));
      if (!r.witness) return false;
      FcSolution sol;
      for (std::size_t j = 0; j < reps.size(); ++j) {
        if (r.witness->assignment[j] != 0) sol.masses.emplace_back(reps[j], r.witness->assignment[j]);
      }
      out.solution = std::move(sol);
      return true;
    }
    for (std::size_t k = 0; k <= used && k < k_size; ++k) {
      ks[m] = k;
      if (rec(m + 1, std::max(used, k + 1))) return true;
    }
    return false;
  };
  rec(0, 0);
  return out;
}

Candidates candidates(const std::vector<Type>& s, std::size_t k_size,
                      std::vector<std::vector<Assignment>>& storage) {
  storage.clear();
  for (const Type& t : s) storage.push_back(config_space(t, k_size));
  Candidates c;
  for (std::size_t d = 0; d < s.size(); ++d) {
    c.types.push_back(&s[d]);
    c.configs.push_back(&storage[d]);
  }
  return c;
}

}  // namespace

std::vector<lp::LinearSystem> build_fc(const Closure& sigma, const Type& gamma,
                                       const std::vector<Type>& s, Agent agent,
                                       std::size_t k_size) {
  const std::vector<Literal> lits = decode(sigma, modal_profile(sigma, gamma, agent));
  const std::vector<Literal> pos = positive_kv(lits);
  std::vector<std::vector<Assignment>> storage;
  const Candidates c = candidates(s, k_size, storage);
  std::vector<std::pair<std::size_t, std::size_t>> cols;
  std::vector<std::string> names;
  for (std::size_t d = 0; d < s.size(); ++d) {
    for (std::size_t fi = 0; fi < storage[d].size(); ++fi) {
      cols.emplace_back(d, fi);
      names.push_back(var_name(d, storage[d][fi]));
    }
  }
  auto column = [&](std::size_t j) {
    return std::make_pair(c.types[cols[j].first], &storage[cols[j].first][cols[j].second]);
  };
  const lp::LinearSystem base = base_system(lits, k_size, std::move(names), column);

  std::vector<lp::LinearSystem> out;
  std::vector<std::size_t> ks(pos.size(), 0);
  std::function<void(std::size_t)> rec = [&](std::size_t m) {
    if (m == pos.size()) {
      lp::LinearSystem sys = base;
      add_witness_rows(sys, pos, ks, column);
      out.push_back(std::move(sys));
      return;
    }
    for (std::size_t k = 0; k < k_size; ++k) {
      ks[m] = k;
      rec(m + 1);
    }
  };
  rec(0);
  return out;
}

FcOutcome solve_fc(const Closure& sigma, const ModalProfile& profile,
                   const std::vector<Type>& s, std::size_t k_size) {
  std::vector<std::vector<Assignment>> storage;
  return solve_reduced(sigma, profile, candidates(s, k_size, storage), k_size);
}

std::optional<FcSolution> fc_feasible(const Closure& sigma, const Type& gamma,
                                      const std::vector<Type>& s, Agent agent,
                                      std::size_t k_size) {
  return solve_fc(sigma, modal_profile(sigma, gamma, agent), s, k_size).solution;
}

std::vector<Elimination> EliminationTrace::all_eliminated() const {
  std::vector<Elimination> out;
  for (const Stage& st : stages) {
    out.insert(out.end(), st.eliminated.begin(), st.eliminated.end());
  }
  return out;
}

std::vector<Type> TypeSpace::star_types() const {
  std::vector<Type> out;
  for (std::size_t i : survivors) out.push_back(initial[i]);
  return out;
}

std::vector<Agent> construction_agents(const Closure& sigma) {
  if (sigma.agents().empty()) return {Agent{1}};
  return sigma.agents();
}

TypeSpace iterate_elimination(const Closure& sigma, std::size_t k_size,
                              const EnumerateOptions& opts) {
  TypeSpace space;
  space.sigma = sigma;
  space.k_size = k_size;
  space.agents = construction_agents(sigma);
  if (k_size < sigma.terms().size()) {
    throw Error(Errc::kTooFewCoordinates,
                std::to_string(k_size) + " coordinates for " +
                    std::to_string(sigma.terms().size()) + " terms");
  }
  space.initial = enumerate_types(sigma, opts);
  std::vector<std::vector<Assignment>> configs;
  for (const Type& t : space.initial) configs.push_back(config_space(t, k_size));

  auto restrict_to = [&](const std::vector<std::size_t>& idx) {
    Candidates c;
    for (std::size_t i : idx) {
      c.types.push_back(&space.initial[i]);
      c.configs.push_back(&configs[i]);
    }
    return c;
  };

  std::vector<std::size_t> current(space.initial.size());
  for (std::size_t i = 0; i < current.size(); ++i) current[i] = i;
  space.trace.stages.push_back(Stage{0, current, {}});

  for (;;) {
    const Candidates s = restrict_to(current);
    std::map<std::pair<unsigned, ModalProfile>, std::shared_ptr<FcOutcome>> cache;
    std::vector<std::size_t> next;
    std::vector<Elimination> eliminated;
    for (std::size_t i : current) {
      bool keep = true;
      for (Agent a : space.agents) {
        ModalProfile p = modal_profile(sigma, space.initial[i], a);
        auto& slot = cache[{a.index, p}];
        if (!slot) slot = std::make_shared<FcOutcome>(solve_reduced(sigma, p, s, k_size));
        if (!slot->solution) {
          eliminated.push_back(
              Elimination{i, a, std::move(p), slot->disjuncts_tried, slot->systems});
          keep = false;
          break;
        }
      }
      if (keep) next.push_back(i);
    }
    const std::size_t index = space.trace.stages.size();
    const bool fixed = eliminated.empty();
    space.trace.stages.push_back(Stage{index, next, std::move(eliminated)});
    current = std::move(next);
    if (fixed) break;
  }
  space.survivors = current;

  // Solutions over Type* itself.
  const Candidates star = restrict_to(current);
  std::map<std::pair<unsigned, ModalProfile>, std::shared_ptr<const FcSolution>> cache;
  for (std::size_t p = 0; p < current.size(); ++p) {
    for (Agent a : space.agents) {
      ModalProfile prof = modal_profile(sigma, space.initial[current[p]], a);
      auto& slot = cache[{a.index, prof}];
      if (!slot) {
        FcOutcome r = solve_reduced(sigma, prof, star, k_size);
        if (!r.solution) {
          throw Error(Errc::kInternal, "surviving type fails FC at the fixed point");
        }
        slot = std::make_shared<const FcSolution>(std::move(*r.solution));
      }
      space.solutions[{p, a.index}] = slot;
    }
  }
  return space;
}

std::vector<Formula> emit_star_axioms(const Closure& sigma, const EliminationTrace& trace) {
  std::vector<Formula> out;
  for (const Elimination& e : trace.all_eliminated()) {
    std::vector<Formula> lits;
    for (std::size_t i : e.profile.literals) lits.push_back(sigma.formulas().at(i));
    out.push_back(Formula::neg(Formula::conj_all(lits)));
  }
  return out;
}

std::optional<std::size_t> lindenbaum(const Formula& chi, const Closure& sigma,
                                      const std::vector<Type>& star) {
  auto idx = sigma.index_of(chi);
  if (!idx) {
    throw Error(Errc::kFormulaNotInClosure, chi.text() + " is not in the closure");
  }
  for (std::size_t i = 0; i < star.size(); ++i) {
    if (star[i].has(*idx)) return i;
  }
  return std::nullopt;
}

std::vector<std::string> type_literals(const Closure& sigma, const Type& t) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    if (t.has(i)) out.push_back(sigma.formulas()[i].text());
  }
  return out;
}

std::string assignment_label(const Assignment& f) {
  std::string s;
  for (std::size_t t = 0; t < f.size(); ++t) {
    if (t) s += '.';
    s += std::to_string(static_cast<unsigned>(f[t]) + 1);
  }
  return s;
}

}  // namespace ptkv::ts
