#include <random>

#include "doctest.h"
#include "ptkv/axioms.hpp"
#include "ptkv/canonical.hpp"
#include "support.hpp"

using namespace ptkv;
using namespace ptkv::canon;
using testing::error_of;
using testing::F;
using testing::Q;

TEST_CASE("coordinate policies") {
  Closure one = finite_closure(F("Kv_1^{3/5}(t)"));
  Closure none = finite_closure(F("p"));
  CHECK(KSize::paper().resolve(one) == 1);
  CHECK(KSize::plus_one().resolve(one) == 2);
  CHECK(KSize::paper().resolve(none) == 1);
  CHECK(KSize::parse("plus-one").resolve(none) == 1);
  CHECK(KSize::parse("4").resolve(one) == 4);
  CHECK(error_of([] { KSize::parse("0"); }) == Errc::kInvalidArgument);
  CHECK(error_of([] { KSize::parse("lots"); }) == Errc::kInvalidArgument);
  CHECK(error_of([&] { KSize::explicit_size(1).resolve(finite_closure(F("t = s"))); }) ==
        Errc::kTooFewCoordinates);
}

TEST_CASE("canonical model of an atom") {
  ts::TypeSpace sp = ts::iterate_elimination(finite_closure(F("p")), 1);
  CanonicalModel cm = build_canonical(sp);
  CHECK(cm.model.world_count() == 2);
  CHECK(validate(cm.model).ok());
  for (std::size_t w = 0; w < 2; ++w) CHECK(cm.model.measure(Agent{1}, w)->total() == 1);
  TruthLemmaReport r = verify_truth_lemma(cm, sp.sigma);
  CHECK(r.ok());
  CHECK(r.checks == 4);
}

TEST_CASE("canonical model of a Kv closure, and a corrupted copy") {
  Closure sigma = finite_closure(F("Kv_1^{3/5}(t)"));
  const std::size_t kv = *sigma.index_of(F("Kv_1^{3/5}(t)"));
  ts::TypeSpace sp = ts::iterate_elimination(sigma, 2);
  CanonicalModel cm = build_canonical(sp);
  REQUIRE(validate(cm.model).ok());
  CHECK(verify_truth_lemma(cm, sigma).ok());
  CHECK(quotient_mismatches(cm, sp) == 0);

  std::size_t w = 0;
  while (!cm.worlds[w].type.has(kv)) ++w;
  std::vector<Rat> fibers = fiber_masses(cm.model, Agent{1}, w, Term{"t"});
  std::size_t locked = fibers[0] >= Q("3/5") ? 0 : 1;
  REQUIRE(fibers[locked] >= Q("3/5"));

  // Move 1/5 of mass off the locked fiber so no value reaches 3/5.
  const Distribution* mu = cm.model.measure(Agent{1}, w);
  std::vector<std::pair<std::size_t, Rat>> e = mu->masses;
  std::size_t from = e.size(), to = e.size();
  for (std::size_t i = 0; i < e.size(); ++i) {
    const bool in = *cm.model.term_value(e[i].first, Term{"t"}) == locked;
    if (in && from == e.size()) from = i;
    if (!in && to == e.size()) to = i;
  }
  REQUIRE(from < e.size());
  CanonicalModel bad = cm;
  if (to == e.size()) {
    // No world outside the fiber carries mass yet; use one with mass 0.
    for (std::size_t u = 0; u < cm.model.world_count(); ++u) {
      if (*cm.model.term_value(u, Term{"t"}) != locked) {
        e.emplace_back(u, Rat(0));
        to = e.size() - 1;
        break;
      }
    }
  }
  const Rat shift = fibers[locked] - Q("1/2");
  e[from].second -= shift;
  e[to].second += shift;
  bad.model.set_measure(Agent{1}, w, Distribution::from_entries(e));
  REQUIRE(validate(bad.model).ok());
  TruthLemmaReport r = verify_truth_lemma(bad, sigma);
  CHECK(!r.violations.empty());
  CHECK(r.stratified);
}

TEST_CASE("empty Type* cannot be built") {
  ts::TypeSpace sp = ts::iterate_elimination(finite_closure(F("Kv_1^{3/5}(t)")), 1);
  sp.survivors.clear();
  CHECK(error_of([&] { build_canonical(sp); }) == Errc::kMissingSolution);
  ts::TypeSpace missing = ts::iterate_elimination(finite_closure(F("p")), 1);
  missing.solutions.clear();
  CHECK(error_of([&] { build_canonical(missing); }) == Errc::kMissingSolution);
}

TEST_CASE("decide_sat on the documented formulas") {
  SatVerdict kv = decide_sat(F("Kv_1^{3/5}(t)"));
  CHECK(kv.sat);
  CHECK(kv.checked);
  CHECK(satisfies(kv.model, kv.world, F("Kv_1^{3/5}(t)")));

  SatVerdict excl = decide_sat(F("(K_1^{3/4}p & K_1^{3/4}~p)"));
  CHECK(!excl.sat);
  CHECK(excl.note == "no model via canonical construction");
  CHECK(!brute_force_sat(F("(K_1^{3/4}p & K_1^{3/4}~p)")));

  CHECK(!decide_sat(F("(p & ~p)")).sat);

  SatVerdict neg = decide_sat(F("~Kv_1^{3/5}(t)"));
  CHECK(neg.sat);
  CHECK(neg.checked);
  SatVerdict paper = decide_sat(F("~Kv_1^{3/5}(t)"), {KSize::paper()});
  CHECK(!paper.sat);
  REQUIRE(paper.star_axioms.size() == 1);
  CHECK(paper.star_axioms[0] == F("~~Kv_1^{3/5}(t)"));

  nlohmann::json j = verdict_to_json(kv);
  CHECK(j["result"] == "sat");
  CHECK(j["checked"] == true);
  CHECK(model_from_json(j["model"]).world_index(j["world"]).has_value());
  nlohmann::json u = verdict_to_json(paper);
  CHECK(u["result"] == "unsat");
  CHECK(u["star_axioms"][0] == "~~Kv_1^{3/5}(t)");
}

TEST_CASE("replicas preserve truth") {
  SatOptions o;
  o.replicas = 3;
  Formula chi = F("(K_1^{1/2}Kv_1^{3/5}(t) & ~p)");
  SatVerdict v = decide_sat(chi, o);
  REQUIRE(v.sat);
  CHECK(v.checked);
  CHECK(v.world.find("#1") != std::string::npos);

  ts::TypeSpace sp = ts::iterate_elimination(finite_closure(chi), 2);
  CanonicalModel cm = build_canonical(sp);
  ProbModel rep = materialize_replicas(cm.model, 3);
  CHECK(validate(rep).ok());
  CHECK(rep.world_count() == 3 * cm.model.world_count());
  for (const Formula& f : sp.sigma.formulas()) {
    WorldSet a = extension(cm.model, f), b = extension(rep, f);
    for (std::size_t w = 0; w < a.size(); ++w) {
      for (std::size_t n = 0; n < 3; ++n) CHECK(b[w * 3 + n] == a[w]);
    }
  }
}

TEST_CASE("brute force on the documented formulas") {
  auto kv = brute_force_sat(F("Kv_1^{3/5}(t)"));
  REQUIRE(kv);
  CHECK(kv->model.world_count() == 1);

  auto neg = brute_force_sat(F("~Kv_1^{3/5}(t)"));
  REQUIRE(neg);
  CHECK(neg->model.world_count() == 2);
  std::vector<Rat> fibers = fiber_masses(neg->model, Agent{1}, neg->world, Term{"t"});
  CHECK(fibers == std::vector<Rat>{Q("1/2"), Q("1/2")});

  CHECK(!brute_force_sat(F("(p & ~p)")));
  CHECK(error_of([] { brute_force_sat(F("p"), {5, 3, 3}); }) == Errc::kBoundsTooLarge);
  CHECK(error_of([] { brute_force_sat(F("p"), {3, 4, 3}); }) == Errc::kBoundsTooLarge);
  CHECK(error_of([] { brute_force_sat(F("p"), {3, 3, 4}); }) == Errc::kBoundsTooLarge);
}

TEST_CASE("property: oracle coherence and certificate soundness") {
  std::mt19937_64 rng(8);
  axioms::RandomFormulaOptions o;
  o.max_depth = 1;
  o.atoms = {"p"};
  o.terms = {Term{"t"}};
  o.agents = {Agent{1}};
  o.max_denominator = 4;
  std::size_t sat = 0, unsat = 0;
  for (int n = 0; n < 40; ++n) {
    Formula chi = Formula::conj(axioms::random_formula(rng, o), axioms::random_formula(rng, o));
    SatVerdict v = decide_sat(chi);
    if (v.sat) {
      ++sat;
      CHECK(v.checked);
      CHECK(validate(v.model).ok());
      CHECK(satisfies(v.model, v.world, chi));
    } else {
      ++unsat;
      CHECK_MESSAGE(!brute_force_sat(chi, {2, 2, 3}), chi.text());
    }
    ts::TypeSpace& sp = v.space;
    if (!sp.survivors.empty()) {
      CanonicalModel cm = build_canonical(sp);
      CHECK(verify_truth_lemma(cm, sp.sigma).ok());
      CHECK(quotient_mismatches(cm, sp) == 0);
    }
  }
  CHECK(sat > 0);
}

TEST_CASE("generated submodels keep truth at the root") {
  std::mt19937_64 rng(12);
  axioms::RandomFormulaOptions o;
  o.max_depth = 2;
  for (int n = 0; n < 100; ++n) {
    ProbModel m = random_model(rng);
    Formula f = axioms::random_formula(rng, o);
    for (std::size_t w = 0; w < m.world_count(); ++w) {
      PointedModel sub = generated_submodel(m, w);
      CHECK(validate(sub.model).ok());
      CHECK(satisfies(sub.model, sub.world, f) == satisfies(m, w, f));
    }
  }
}

TEST_CASE("closure report") {
  nlohmann::json p = closure_report(F("p"));
  CHECK(p["closure_size"] == 2);
  CHECK(p["type_count"] == 2);
  CHECK(p["type_star_count"] == 2);
  CHECK(p["policy_divergence"] == false);

  nlohmann::json kv = closure_report(F("Kv_1^{3/5}(t)"));
  CHECK(kv["policies"]["paper"]["type_star_count"] == 1);
  CHECK(kv["policies"]["plus_one"]["type_star_count"] == 2);
  CHECK(kv["policy_divergence"] == true);

  nlohmann::json eq = closure_report(F("K_1^{1/2}(t = s)"));
  std::vector<std::string> members = eq["closure"];
  CHECK(std::count(members.begin(), members.end(), "s = t") == 1);
  CHECK(std::count(members.begin(), members.end(), "t = t") == 1);
}
