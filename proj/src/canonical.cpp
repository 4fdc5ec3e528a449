#include "ptkv/canonical.hpp"

#include <algorithm>
#include <charconv>
#include <map>

#include "ptkv/error.hpp"

namespace ptkv::canon {

KSize KSize::parse(std::string_view text) {
  if (text == "paper") return paper();
  if (text == "plus-one" || text == "plus_one") return plus_one();
  std::size_t n = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
  if (ec != std::errc() || ptr != text.data() + text.size() || n == 0) {
    throw Error(Errc::kInvalidArgument,
                "k-size must be paper, plus-one or a positive integer, got '" +
                    std::string(text) + "'");
  }
  return explicit_size(n);
}

std::string KSize::name() const {
  switch (policy) {
    case Policy::kPaper: return "paper";
    case Policy::kPlusOne: return "plus_one";
    case Policy::kExplicit: return std::to_string(n);
  }
  return {};
}

std::size_t KSize::resolve(const Closure& sigma) const {
  const std::size_t t = sigma.terms().size();
  switch (policy) {
    case Policy::kPaper: return std::max<std::size_t>(t, 1);
    case Policy::kPlusOne: return t + 1;
    case Policy::kExplicit:
      if (n < std::max<std::size_t>(t, 1)) {
        throw Error(Errc::kTooFewCoordinates,
                    "k-size " + std::to_string(n) + " is below the " + std::to_string(t) +
                        " terms of the closure");
      }
      return n;
  }
  return t + 1;
}

std::string world_name(std::size_t type_index, const ts::Assignment& f) {
  std::string s = "T" + std::to_string(type_index);
  if (!f.empty()) s += "[" + ts::assignment_label(f) + "]";
  return s;
}

CanonicalModel build_canonical(const ts::TypeSpace& space) {
  if (space.survivors.empty()) {
    throw Error(Errc::kMissingSolution, "no surviving types to build a model from");
  }
  const Closure& sigma = space.sigma;
  CanonicalModel cm;
  std::vector<std::string> names;
  for (std::size_t p = 0; p < space.survivors.size(); ++p) {
    const std::size_t ti = space.survivors[p];
    const ts::Type& t = space.initial[ti];
    cm.offsets.push_back(cm.worlds.size());
    for (ts::Assignment& f : ts::config_space(t, space.k_size)) {
      names.push_back(world_name(ti, f));
      cm.worlds.push_back(CanonicalWorld{p, ti, t, std::move(f)});
    }
  }
  std::vector<std::string> domain;
  for (std::size_t k = 1; k <= space.k_size; ++k) domain.push_back("d" + std::to_string(k));
  cm.model = ProbModel(std::move(names), std::move(domain));

  for (std::size_t w = 0; w < cm.worlds.size(); ++w) {
    const CanonicalWorld& cw = cm.worlds[w];
    for (std::size_t i = 0; i < sigma.size(); ++i) {
      const Formula& f = sigma.formulas()[i];
      if (f.is(Kind::kAtom)) cm.model.set_prop(w, f.atom_name(), cw.type.has(i));
    }
    for (std::size_t t = 0; t < sigma.terms().size(); ++t) {
      cm.model.set_term_value(w, sigma.terms()[t], cw.f[t]);
    }
  }
  for (Agent a : space.agents) {
    for (std::size_t p = 0; p < space.survivors.size(); ++p) {
      auto it = space.solutions.find({p, a.index});
      if (it == space.solutions.end() || !it->second) {
        throw Error(Errc::kMissingSolution,
                    "no retained solution for type " + std::to_string(space.survivors[p]) +
                        " and agent " + std::to_string(a.index));
      }
      std::vector<std::pair<std::size_t, Rat>> entries;
      for (const auto& [key, z] : it->second->masses) {
        entries.emplace_back(cm.world_of(key.first, key.second), z);
      }
      auto dist = std::make_shared<const Distribution>(Distribution::from_entries(std::move(entries)));
      const std::size_t end =
          p + 1 < cm.offsets.size() ? cm.offsets[p + 1] : cm.worlds.size();
      for (std::size_t w = cm.offsets[p]; w < end; ++w) cm.model.set_measure(a, w, dist);
    }
  }
  return cm;
}

TruthLemmaReport verify_truth_lemma(const CanonicalModel& cm, const Closure& sigma) {
  TruthLemmaReport report;
  std::vector<std::size_t> order(sigma.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::vector<std::size_t> depth(sigma.size());
  for (std::size_t i = 0; i < sigma.size(); ++i) depth[i] = modal_depth(sigma.formulas()[i]);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return depth[x] < depth[y]; });

  Evaluator ev(cm.model);
  std::size_t current = 0;
  ev.on_compute([&](const Formula& f) {
    if (modal_depth(f) > current) report.stratified = false;
  });
  for (std::size_t i : order) {
    current = depth[i];
    const Formula& phi = sigma.formulas()[i];
    const WorldSet& ext = ev.extension(phi);
    for (std::size_t w = 0; w < cm.worlds.size(); ++w) {
      ++report.checks;
      const bool member = cm.worlds[w].type.has(i);
      if (ext[w] != member) {
        report.violations.push_back({phi.text(), cm.model.worlds()[w], member});
      }
    }
  }
  return report;
}

std::size_t quotient_mismatches(const CanonicalModel& cm, const ts::TypeSpace& space) {
  std::size_t bad = 0;
  Evaluator ev(cm.model);
  for (const auto& [key, sol] : space.solutions) {
    const Distribution* mu = cm.model.measure(Agent{key.second}, cm.offsets.at(key.first));
    for (std::size_t i = 0; i < space.sigma.size(); ++i) {
      Rat expected = 0;
      for (const auto& [col, z] : sol->masses) {
        if (space.initial[space.survivors[col.first]].has(i)) expected += z;
      }
      if (!mu || mu->mass_of(ev.extension(space.sigma.formulas()[i])) != expected) ++bad;
    }
  }
  return bad;
}

ProbModel materialize_replicas(const ProbModel& m, std::size_t copies) {
  if (copies == 0) throw Error(Errc::kInvalidArgument, "replica count must be positive");
  std::vector<std::string> names;
  for (const std::string& w : m.worlds()) {
    for (std::size_t n = 1; n <= copies; ++n) names.push_back(w + "#" + std::to_string(n));
  }
  ProbModel out(std::move(names), m.domain());
  const Rat half(1, 2);
  Rat tail = 1;
  for (std::size_t n = 0; n < copies; ++n) tail *= half;
  const Rat scale = 1 - tail;  // 1 - 2^-copies
  for (std::size_t w = 0; w < m.world_count(); ++w) {
    for (std::size_t n = 0; n < copies; ++n) {
      const std::size_t r = w * copies + n;
      for (const auto& [p, v] : m.props_at(w)) out.set_prop(r, p, v);
      for (const auto& [t, d] : m.terms_at(w)) out.set_term_value(r, Term{t}, d);
    }
  }
  for (Agent a : m.agents()) {
    for (std::size_t w = 0; w < m.world_count(); ++w) {
      const Distribution* mu = m.measure(a, w);
      if (!mu) continue;
      std::vector<std::pair<std::size_t, Rat>> entries;
      for (const auto& [u, z] : mu->masses) {
        Rat weight = half;
        for (std::size_t n = 0; n < copies; ++n) {
          entries.emplace_back(u * copies + n, Rat(z * weight / scale));
          weight *= half;
        }
      }
      auto dist = std::make_shared<const Distribution>(Distribution::from_entries(std::move(entries)));
      for (std::size_t n = 0; n < copies; ++n) out.set_measure(a, w * copies + n, dist);
    }
  }
  return out;
}

PointedModel generated_submodel(const ProbModel& m, std::size_t world) {
  std::vector<bool> reach(m.world_count(), false);
  std::vector<std::size_t> stack{world};
  reach.at(world) = true;
  const std::vector<Agent> agents = m.agents();
  while (!stack.empty()) {
    const std::size_t w = stack.back();
    stack.pop_back();
    for (Agent a : agents) {
      const Distribution* mu = m.measure(a, w);
      if (!mu) continue;
      for (const auto& [u, z] : mu->masses) {
        if (!reach[u]) {
          reach[u] = true;
          stack.push_back(u);
        }
      }
    }
  }
  std::vector<std::size_t> renum(m.world_count(), 0);
  std::vector<std::string> names;
  for (std::size_t w = 0; w < m.world_count(); ++w) {
    if (!reach[w]) continue;
    renum[w] = names.size();
    names.push_back(m.worlds()[w]);
  }
  PointedModel out{ProbModel(std::move(names), m.domain()), renum[world]};
  for (std::size_t w = 0; w < m.world_count(); ++w) {
    if (!reach[w]) continue;
    for (const auto& [p, v] : m.props_at(w)) out.model.set_prop(renum[w], p, v);
    for (const auto& [t, d] : m.terms_at(w)) out.model.set_term_value(renum[w], Term{t}, d);
  }
  // Keep shared distributions shared.
  std::map<const Distribution*, DistributionPtr> moved;
  for (Agent a : agents) {
    for (std::size_t w = 0; w < m.world_count(); ++w) {
      if (!reach[w]) continue;
      const DistributionPtr& mu = m.measure_ptr(a, w);
      if (!mu) continue;
      auto& slot = moved[mu.get()];
      if (!slot) {
        std::vector<std::pair<std::size_t, Rat>> entries;
        for (const auto& [u, z] : mu->masses) entries.emplace_back(renum[u], z);
        slot = std::make_shared<const Distribution>(Distribution::from_entries(std::move(entries)));
      }
      out.model.set_measure(a, renum[w], slot);
    }
  }
  return out;
}

SatVerdict decide_sat(const Formula& chi, const SatOptions& opts) {
  SatVerdict v;
  v.formula = chi;
  const Closure sigma = finite_closure(chi);
  v.k_size = opts.k_size.resolve(sigma);
  v.space = ts::iterate_elimination(sigma, v.k_size, opts.enumerate);
  v.star_axioms = ts::emit_star_axioms(sigma, v.space.trace);

  const std::vector<ts::Type> star = v.space.star_types();
  auto gamma0 = ts::lindenbaum(chi, sigma, star);
  if (!gamma0) {
    v.note = "no model via canonical construction";
    return v;
  }
  v.sat = true;
  const CanonicalModel cm = build_canonical(v.space);
  // Designated world: Gamma0 with its first assignment.
  std::size_t designated = cm.world_of(*gamma0, 0);
  ProbModel full = cm.model;
  if (opts.replicas > 0) {
    full = materialize_replicas(cm.model, opts.replicas);
    designated *= opts.replicas;
  }
  PointedModel cert = generated_submodel(full, designated);
  v.world = cert.model.worlds()[cert.world];
  v.checked = validate(cert.model).ok() && satisfies(cert.model, cert.world, chi);
  if (!v.checked) v.note = "certificate failed re-verification";
  v.model = std::move(cert.model);
  return v;
}

nlohmann::json verdict_to_json(const SatVerdict& v) {
  if (v.sat) {
    nlohmann::json j = {{"result", "sat"},
                        {"model", model_to_json(v.model)},
                        {"world", v.world},
                        {"checked", v.checked},
                        {"k_size", v.k_size}};
    if (!v.note.empty()) j["note"] = v.note;
    return j;
  }
  nlohmann::json axioms = nlohmann::json::array();
  for (const Formula& f : v.star_axioms) axioms.push_back(f.text());
  return {{"result", "unsat"},
          {"trace", ts::trace_to_json(v.space, v.star_axioms)},
          {"star_axioms", axioms},
          {"note", v.note},
          {"k_size", v.k_size}};
}

}  // namespace ptkv::canon

namespace ptkv::canon {

nlohmann::json closure_report(const Formula& chi, const SatOptions& opts) {
  using nlohmann::json;
  const Closure sigma = finite_closure(chi);
  json members = json::array();
  for (const Formula& f : sigma.formulas()) members.push_back(f.text());
  json terms = json::array();
  for (const Term& t : sigma.terms()) terms.push_back(t.name);
  json thresholds = json::array();
  for (const Rat& q : sigma.thresholds()) thresholds.push_back(rat_to_json_string(q));
  json agents = json::array();
  for (Agent a : sigma.agents()) agents.push_back(a.index);

  const std::size_t k = opts.k_size.resolve(sigma);
  const ts::TypeSpace space = ts::iterate_elimination(sigma, k, opts.enumerate);
  const std::vector<Formula> axioms = ts::emit_star_axioms(sigma, space.trace);
  json eliminated = json::array();
  for (const ts::Elimination& e : space.trace.all_eliminated()) {
    json profile = json::array();
    for (std::size_t i : e.profile.literals) profile.push_back(sigma.formulas()[i].text());
    eliminated.push_back({{"type", e.type_index}, {"agent", e.agent.index}, {"profile", profile}});
  }
  json star_axioms = json::array();
  for (const Formula& f : axioms) star_axioms.push_back(f.text());
  json type_star = json::array();
  for (std::size_t i : space.survivors) type_star.push_back(ts::type_literals(sigma, space.initial[i]));

  json policies = json::object();
  // Both policies share the initial type list, so survivor index sets compare.
  std::vector<std::vector<std::size_t>> survivors;
  for (KSize policy : {KSize::paper(), KSize::plus_one()}) {
    const std::size_t kp = policy.resolve(sigma);
    survivors.push_back(kp == k ? space.survivors
                                : ts::iterate_elimination(sigma, kp, opts.enumerate).survivors);
    policies[policy.name()] = {{"k_size", kp}, {"type_star_count", survivors.back().size()}};
  }
  return {{"formula", chi.text()},
          {"closure", members},
          {"closure_size", sigma.size()},
          {"core_size", sigma.core_size()},
          {"terms", terms},
          {"thresholds", thresholds},
          {"agents", agents},
          {"k_size_policy", opts.k_size.name()},
          {"k_size", k},
          {"type_count", space.initial.size()},
          {"type_star_count", space.survivors.size()},
          {"type_star", type_star},
          {"stages", space.trace.stages.size()},
          {"eliminated", eliminated},
          {"star_axioms", star_axioms},
          {"policies", policies},
          {"policy_divergence", survivors[0] != survivors[1]}};
}

}  // namespace ptkv::canon
