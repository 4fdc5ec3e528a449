#include "ptkv/axioms.hpp"

#include <algorithm>
#include <array>

#include "ptkv/error.hpp"

namespace ptkv::axioms {

namespace {

struct NamedSchema {
  SchemaId id;
  const char* name;
};

constexpr std::array<NamedSchema, 15> kSchemaNames{{
    {SchemaId::kTaut, "TAUT"},
    {SchemaId::kEqRef, "EqRef"},
    {SchemaId::kEqSym, "EqSym"},
    {SchemaId::kEqTrans, "EqTrans"},
    {SchemaId::kEqSub, "EqSub"},
    {SchemaId::kKMon, "KMon"},
    {SchemaId::kKImp, "KImp"},
    {SchemaId::kKExcl, "KExcl"},
    {SchemaId::kKZero, "KZero"},
    {SchemaId::kKEqSub1, "KEqSub1"},
    {SchemaId::kKvEqSub1, "KvEqSub1"},
    {SchemaId::kKSub1, "KSub1"},
    {SchemaId::kKAdd1, "KAdd1"},
    {SchemaId::kKvMon, "KvMon"},
    {SchemaId::kNecK, "NecK"},
}};

constexpr std::array<std::pair<NegativeControl, const char*>, 4> kControlNames{{
    {NegativeControl::kFactivity, "factivity"},
    {NegativeControl::kPositiveIntrospection, "positive-introspection"},
    {NegativeControl::kKvIntrospection, "kv-introspection"},
    {NegativeControl::kKvMonReversed, "kvmon-reversed"},
}};

[[noreturn]] void side_condition(const std::string& what) {
  throw Error(Errc::kSideConditionViolated, "side condition violated: " + what);
}

void require_unit(const Rat& r, const char* name) {
  if (!is_unit_interval(r)) side_condition(std::string(name) + " in [0,1]");
}

void require_high(const Rat& r, const char* name) {
  if (!is_high_threshold(r)) side_condition(std::string(name) + " in (1/2,1]");
}

Formula eq(const Term& a, const Term& b) { return Formula::eq(a, b); }
Formula imp(Formula a, Formula b) { return Formula::imp(std::move(a), std::move(b)); }
Formula neg(Formula a) { return Formula::neg(std::move(a)); }
Formula conj(Formula a, Formula b) { return Formula::conj(std::move(a), std::move(b)); }
Formula disj(Formula a, Formula b) { return Formula::disj(std::move(a), std::move(b)); }
Formula iff(Formula a, Formula b) { return Formula::iff(std::move(a), std::move(b)); }

Formula taut(std::size_t which, const Formula& a, const Formula& b,
             const Formula& c) {
  switch (which % kTautTemplateCount) {
    case 0: return imp(a, a);
    case 1: return imp(imp(imp(a, b), a), a);  // Peirce
    case 2: return iff(neg(conj(a, b)), disj(neg(a), neg(b)));
    case 3: return iff(neg(disj(a, b)), conj(neg(a), neg(b)));
    case 4: return disj(a, neg(a));
    case 5: return imp(neg(neg(a)), a);
    case 6: return imp(imp(a, b), imp(neg(b), neg(a)));
    case 7: return imp(imp(a, imp(b, c)), imp(imp(a, b), imp(a, c)));
    default: return imp(a, imp(b, a));
  }
}

}  // namespace

const char* schema_name(SchemaId id) {
  for (const auto& s : kSchemaNames) {
    if (s.id == id) return s.name;
  }
  return "?";
}

std::optional<SchemaId> schema_from_name(std::string_view name) {
  for (const auto& s : kSchemaNames) {
    if (name == s.name) return s.id;
  }
  return std::nullopt;
}

const std::vector<SchemaId>& axiom_schemata() {
  static const std::vector<SchemaId> kAll = [] {
    std::vector<SchemaId> v;
    for (const auto& s : kSchemaNames) {
      if (s.id != SchemaId::kNecK) v.push_back(s.id);
    }
    return v;
  }();
  return kAll;
}

Formula instantiate(SchemaId schema, const SchemaParams& p) {
  const Agent i = p.agent;
  switch (schema) {
    case SchemaId::kTaut: return taut(p.taut_template, p.phi, p.psi, p.chi);
    case SchemaId::kEqRef: return eq(p.t, p.t);
    case SchemaId::kEqSym: return imp(eq(p.t, p.s), eq(p.s, p.t));
    case SchemaId::kEqTrans:
      return imp(conj(eq(p.t, p.s), eq(p.s, p.u)), eq(p.t, p.u));
    case SchemaId::kEqSub:
      return imp(eq(p.t, p.s), iff(eq(p.t, p.u), eq(p.s, p.u)));
    case SchemaId::kKMon:
      require_unit(p.theta, "theta");
      require_unit(p.theta_prime, "theta'");
      if (!(p.theta <= p.theta_prime)) side_condition("theta <= theta'");
      return imp(Formula::k(i, p.theta_prime, p.phi), Formula::k(i, p.theta, p.phi));
    case SchemaId::kKImp: {
      require_unit(p.alpha, "alpha");
      require_unit(p.beta, "beta");
      Rat floor = p.alpha + p.beta - 1;
      if (floor < 0) floor = 0;
      return imp(Formula::k(i, p.alpha, imp(p.phi, p.psi)),
                 imp(Formula::k(i, p.beta, p.phi), Formula::k(i, floor, p.psi)));
    }
    case SchemaId::kKExcl:
      require_unit(p.alpha, "alpha");
      require_unit(p.beta, "beta");
      if (!(p.alpha + p.beta > 1)) side_condition("alpha + beta > 1");
      return imp(Formula::k(i, p.alpha, p.phi),
                 neg(Formula::k(i, p.beta, neg(p.phi))));
    case SchemaId::kKZero: return Formula::k(i, Rat(0), p.phi);
    case SchemaId::kKEqSub1:
      require_unit(p.theta, "theta");
      return imp(Formula::k(i, Rat(1), eq(p.t, p.s)),
                 iff(Formula::k(i, p.theta, eq(p.t, p.u)),
                     Formula::k(i, p.theta, eq(p.s, p.u))));
    case SchemaId::kKvEqSub1:
      require_high(p.eta, "eta");
      return imp(Formula::k(i, Rat(1), eq(p.t, p.s)),
                 iff(Formula::kv(i, p.eta, p.t), Formula::kv(i, p.eta, p.s)));
    case SchemaId::kKSub1:
      require_unit(p.theta, "theta");
      return imp(Formula::k(i, Rat(1), iff(p.phi, p.psi)),
                 iff(Formula::k(i, p.theta, p.phi), Formula::k(i, p.theta, p.psi)));
    case SchemaId::kKAdd1:
      require_unit(p.alpha, "alpha");
      require_unit(p.beta, "beta");
      if (!(p.alpha + p.beta <= 1)) side_condition("alpha + beta <= 1");
      return imp(conj(Formula::k(i, p.alpha, p.phi),
                      conj(Formula::k(i, p.beta, p.psi),
                           Formula::k(i, Rat(1), neg(conj(p.phi, p.psi))))),
                 Formula::k(i, p.alpha + p.beta, disj(p.phi, p.psi)));
    case SchemaId::kKvMon:
      require_high(p.eta, "eta");
      require_high(p.zeta, "zeta");
      if (!(p.zeta <= p.eta)) side_condition("zeta <= eta");
      return imp(Formula::kv(i, p.eta, p.t), Formula::kv(i, p.zeta, p.t));
    case SchemaId::kNecK:
      require_unit(p.theta, "theta");
      return necessitation(p.phi, i, p.theta);
  }
  throw Error(Errc::kInternal, "unknown schema");
}

Formula necessitation(const Formula& f, Agent agent, const Rat& theta) {
  return Formula::k(agent, theta, f);
}

const char* control_name(NegativeControl c) {
  for (const auto& [id, name] : kControlNames) {
    if (id == c) return name;
  }
  return "?";
}

std::optional<NegativeControl> control_from_name(std::string_view name) {
  for (const auto& [id, n] : kControlNames) {
    if (name == n) return id;
  }
  return std::nullopt;
}

const std::vector<NegativeControl>& all_controls() {
  static const std::vector<NegativeControl> kAll = [] {
    std::vector<NegativeControl> v;
    for (const auto& [id, name] : kControlNames) v.push_back(id);
    return v;
  }();
  return kAll;
}

Formula instantiate_control(NegativeControl c, const SchemaParams& p) {
  const Agent i = p.agent;
  switch (c) {
    case NegativeControl::kFactivity:
      return imp(Formula::k(i, p.theta, p.phi), p.phi);
    case NegativeControl::kPositiveIntrospection: {
      Formula k = Formula::k(i, p.theta, p.phi);
      return imp(k, Formula::k(i, p.theta, k));
    }
    case NegativeControl::kKvIntrospection: {
      Formula kv = Formula::kv(i, p.eta, p.t);
      return imp(kv, Formula::k(i, p.theta, kv));
    }
    case NegativeControl::kKvMonReversed:
      return imp(Formula::kv(i, p.eta, p.t), Formula::kv(i, p.zeta, p.t));
  }
  throw Error(Errc::kInternal, "unknown control");
}

// ---------------------------------------------------------------------------
// Random generation

namespace {

template <typename T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& v) {
  return v.at(std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng));
}

std::size_t uniform(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

Rat grid_threshold(std::mt19937_64& rng, bool high, unsigned max_den) {
  const unsigned den = static_cast<unsigned>(uniform(rng, 1, max_den));
  const unsigned lo = high ? den / 2 + 1 : 0;
  Rat r(static_cast<unsigned long>(uniform(rng, lo, den)), den);
  r.canonicalize();
  return r;
}

Formula gen(std::mt19937_64& rng, std::size_t depth, std::size_t budget,
            const RandomFormulaOptions& o) {
  enum Shape { kAtom, kEq, kNot, kImp, kK, kKv };
  std::vector<Shape> shapes{kAtom, kEq};
  if (budget > 0) {
    shapes.push_back(kNot);
    shapes.push_back(kImp);
  }
  if (depth > 0) {
    shapes.push_back(kK);
    shapes.push_back(kKv);
  }
  switch (pick(rng, shapes)) {
    case kAtom: return Formula::atom(pick(rng, o.atoms));
    case kEq: return Formula::eq(pick(rng, o.terms), pick(rng, o.terms));
    case kNot: return Formula::neg(gen(rng, depth, budget - 1, o));
    case kImp:
      return Formula::imp(gen(rng, depth, budget / 2, o),
                          gen(rng, depth, (budget - 1) / 2, o));
    case kK:
      return Formula::k(pick(rng, o.agents),
                        grid_threshold(rng, false, o.max_denominator),
                        gen(rng, depth - 1, budget > 0 ? budget - 1 : 0, o));
    case kKv:
      return Formula::kv(pick(rng, o.agents),
                         grid_threshold(rng, true, o.max_denominator),
                         pick(rng, o.terms));
  }
  return Formula::atom(pick(rng, o.atoms));
}

}  // namespace

Formula random_formula(std::mt19937_64& rng, const RandomFormulaOptions& opts) {
  return gen(rng, opts.max_depth, 4, opts);
}

Rat random_threshold(std::mt19937_64& rng, bool high, unsigned max_denominator,
                     const ProbModel* model) {
  if (model != nullptr && uniform(rng, 0, 1) == 1 && !model->agents().empty()) {
    const Agent a = pick(rng, model->agents());
    const Distribution* d = model->measure(a, uniform(rng, 0, model->world_count() - 1));
    if (d != nullptr) {
      WorldSet event(model->world_count());
      for (std::size_t w = 0; w < event.size(); ++w) event[w] = uniform(rng, 0, 1) == 1;
      Rat mass = d->mass_of(event);
      if (!high || is_high_threshold(mass)) return mass;
    }
  }
  return grid_threshold(rng, high, max_denominator);
}

SchemaParams random_params(std::mt19937_64& rng, SchemaId schema,
                           const ProbModel& model, const RandomFormulaOptions& o) {
  SchemaParams p;
  p.agent = pick(rng, o.agents);
  p.t = pick(rng, o.terms);
  p.s = pick(rng, o.terms);
  p.u = pick(rng, o.terms);
  p.phi = random_formula(rng, o);
  p.psi = random_formula(rng, o);
  p.chi = random_formula(rng, o);
  p.taut_template = uniform(rng, 0, kTautTemplateCount - 1);
  auto th = [&](bool high) {
    return random_threshold(rng, high, o.max_denominator, &model);
  };
  p.theta = th(false);
  p.theta_prime = th(false);
  p.alpha = th(false);
  p.beta = th(false);
  p.eta = th(true);
  p.zeta = th(true);
  switch (schema) {
    case SchemaId::kKMon:
      if (p.theta > p.theta_prime) std::swap(p.theta, p.theta_prime);
      break;
    case SchemaId::kKvMon:
      if (p.zeta > p.eta) std::swap(p.zeta, p.eta);
      break;
    case SchemaId::kKExcl:
      while (!(p.alpha + p.beta > 1)) {
        p.alpha = th(false);
        p.beta = th(false);
      }
      break;
    case SchemaId::kKAdd1:
      while (!(p.alpha + p.beta <= 1)) {
        p.alpha = th(false);
        p.beta = th(false);
      }
      break;
    default: break;
  }
  return p;
}

// ---------------------------------------------------------------------------
// Harness

std::size_t SoundnessReport::total_failures() const {
  std::size_t n = 0;
  for (const auto& e : entries) n += e.failures;
  return n;
}

const SchemaReport* SoundnessReport::find(std::string_view name) const {
  for (const auto& e : entries) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

namespace {

ProbModel remove_world(const ProbModel& m, std::size_t gone) {
  std::vector<std::string> worlds;
  std::vector<std::size_t> remap(m.world_count(), 0);
  for (std::size_t w = 0; w < m.world_count(); ++w) {
    if (w == gone) continue;
    remap[w] = worlds.size();
    worlds.push_back(m.worlds()[w]);
  }
  ProbModel out(worlds, m.domain());
  for (std::size_t w = 0; w < m.world_count(); ++w) {
    if (w == gone) continue;
    const std::size_t nw = remap[w];
    for (const auto& [p, b] : m.props_at(w)) out.set_prop(nw, p, b);
    for (const auto& [t, d] : m.terms_at(w)) out.set_term_value(nw, Term{t}, d);
    for (Agent a : m.agents()) {
      const Distribution* d = m.measure(a, w);
      if (d == nullptr) continue;
      std::vector<std::pair<std::size_t, Rat>> e;
      Rat kept = 0;
      for (const auto& [u, mass] : d->masses) {
        if (u == gone) continue;
        e.emplace_back(remap[u], mass);
        kept += mass;
      }
      if (kept == 0) {
        out.set_measure(a, nw, Distribution::point(nw));
      } else {
        for (auto& [u, mass] : e) mass /= kept;
        out.set_measure(a, nw, Distribution::from_entries(std::move(e)));
      }
    }
  }
  return out;
}

ProbModel merge_values(const ProbModel& m, std::size_t keep, std::size_t gone) {
  std::vector<std::string> domain;
  std::vector<std::size_t> remap(m.domain_size(), 0);
  for (std::size_t d = 0; d < m.domain_size(); ++d) {
    if (d == gone) continue;
    remap[d] = domain.size();
    domain.push_back(m.domain()[d]);
  }
  remap[gone] = remap[keep];
  ProbModel out(m.worlds(), domain);
  for (std::size_t w = 0; w < m.world_count(); ++w) {
    for (const auto& [p, b] : m.props_at(w)) out.set_prop(w, p, b);
    for (const auto& [t, d] : m.terms_at(w)) out.set_term_value(w, Term{t}, remap[d]);
    for (Agent a : m.agents()) out.set_measure(a, w, m.measure_ptr(a, w));
  }
  return out;
}

}  // namespace

ProbModel shrink_model(const ProbModel& m,
                       const std::function<bool(const ProbModel&)>& still_fails) {
  ProbModel cur = m;
  bool progress = true;
  while (progress && cur.world_count() > 1) {
    progress = false;
    for (std::size_t w = 0; w < cur.world_count() && cur.world_count() > 1; ++w) {
      ProbModel cand = remove_world(cur, w);
      if (still_fails(cand)) {
        cur = std::move(cand);
        progress = true;
        break;
      }
    }
  }
  progress = true;
  while (progress && cur.domain_size() > 1) {
    progress = false;
    for (std::size_t a = 0; a < cur.domain_size() && !progress; ++a) {
      for (std::size_t b = a + 1; b < cur.domain_size(); ++b) {
        ProbModel cand = merge_values(cur, a, b);
        if (still_fails(cand)) {
          cur = std::move(cand);
          progress = true;
          break;
        }
      }
    }
  }
  return cur;
}

namespace {

std::mt19937_64 trial_rng(std::uint64_t seed, std::size_t stream, std::size_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(trial)};
  return std::mt19937_64(seq);
}

bool fails_somewhere(const ProbModel& m, const Formula& f) {
  return !valid_in_model(m, f);
}

void record(SchemaReport& rep, const Formula& instance, const ProbModel& m,
            const SoundnessOptions& opts) {
  ++rep.failures;
  if (rep.counterexamples.size() >= opts.max_recorded) return;
  ProbModel small = opts.shrink
      ? shrink_model(m, [&](const ProbModel& c) { return fails_somewhere(c, instance); })
      : m;
  WorldSet ext = extension(small, instance);
  std::size_t w = 0;
  while (w < ext.size() && ext[w]) ++w;
  rep.counterexamples.push_back(Counterexample{instance.text(), std::move(small), w});
}

}  // namespace

SoundnessReport soundness_suite(const SoundnessOptions& opts) {
  if (opts.trials == 0) throw Error(Errc::kInvalidArgument, "trials must be >= 1");
  const RandomFormulaOptions fopts;
  RandomModelOptions mopts;
  mopts.terms = fopts.terms;
  mopts.atoms = fopts.atoms;
  mopts.agents = fopts.agents;

  SoundnessReport report;
  std::size_t stream = 0;
  for (SchemaId id : axiom_schemata()) {
    SchemaReport rep;
    rep.name = schema_name(id);
    for (std::size_t k = 0; k < opts.trials; ++k) {
      auto rng = trial_rng(opts.seed, stream, k);
      ProbModel m = random_model(rng, mopts);
      Formula inst = instantiate(id, random_params(rng, id, m, fopts));
      rep.checks += m.world_count();
      if (fails_somewhere(m, inst)) record(rep, inst, m, opts);
    }
    report.entries.push_back(std::move(rep));
    ++stream;
  }

  // Nec_K: premises are instances of the other schemata; whenever a premise
  // holds at every world of the model, its necessitation must as well.
  {
    SchemaReport rep;
    rep.name = schema_name(SchemaId::kNecK);
    for (std::size_t k = 0; k < opts.trials; ++k) {
      auto rng = trial_rng(opts.seed, stream, k);
      ProbModel m = random_model(rng, mopts);
      SchemaId src = pick(rng, axiom_schemata());
      Formula premise = instantiate(src, random_params(rng, src, m, fopts));
      if (!valid_in_model(m, premise)) continue;
      Formula inst = necessitation(premise, pick(rng, fopts.agents),
                                   random_threshold(rng, false, fopts.max_denominator, &m));
      rep.checks += m.world_count();
      if (fails_somewhere(m, inst)) record(rep, inst, m, opts);
    }
    report.entries.push_back(std::move(rep));
    ++stream;
  }

  for (NegativeControl c : opts.controls) {
    SchemaReport rep;
    rep.name = std::string("control:") + control_name(c);
    for (std::size_t k = 0; k < opts.trials; ++k) {
      auto rng = trial_rng(opts.seed, stream, k);
      ProbModel m = random_model(rng, mopts);
      SchemaParams p = random_params(rng, SchemaId::kKMon, m, fopts);
      if (c == NegativeControl::kKvMonReversed) {
        if (p.zeta == p.eta) continue;
        if (p.zeta < p.eta) std::swap(p.zeta, p.eta);
      }
      Formula inst = instantiate_control(c, p);
      rep.checks += m.world_count();
      if (fails_somewhere(m, inst)) record(rep, inst, m, opts);
    }
    report.entries.push_back(std::move(rep));
    ++stream;
  }
  return report;
}

nlohmann::json report_to_json(const SoundnessReport& report) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& e : report.entries) {
    nlohmann::json cex = nlohmann::json::array();
    for (const auto& c : e.counterexamples) {
      cex.push_back({{"instance", c.instance},
                     {"world", c.model.worlds().at(c.world)},
                     {"model", model_to_json(c.model)}});
    }
    out[e.name] = {{"checks", e.checks}, {"failures", e.failures}, {"counterexamples", cex}};
  }
  return out;
}

}  // namespace ptkv::axioms
