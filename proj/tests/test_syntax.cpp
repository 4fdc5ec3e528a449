#include <random>

#include "doctest.h"
#include "ptkv/axioms.hpp"
#include "support.hpp"

using namespace ptkv;
using testing::error_of;
using testing::F;
using testing::Q;

TEST_CASE("parse builds the expected nodes") {
  Formula kv = F("Kv_1^{3/5}(t)");
  CHECK(kv.is(Kind::kKv));
  CHECK(kv.agent() == Agent{1});
  CHECK(kv.threshold() == Q("3/5"));
  CHECK(kv.term() == Term{"t"});

  Formula k = F("K_2^{0}(p -> q)");
  CHECK(k.is(Kind::kK));
  CHECK(k.agent() == Agent{2});
  CHECK(k.threshold() == 0);
  CHECK(k.sub() == Formula::imp(Formula::atom("p"), Formula::atom("q")));
}

TEST_CASE("threshold and rational errors") {
  CHECK(error_of([] { F("Kv_1^{1/2}(t)"); }) == Errc::kThresholdOutOfRange);
  CHECK(error_of([] { F("Kv_1^{0}(t)"); }) == Errc::kThresholdOutOfRange);
  CHECK(error_of([] { F("K_1^{3/2}p"); }) == Errc::kThresholdOutOfRange);
  CHECK(error_of([] { F("K_1^{1/0}p"); }) == Errc::kBadRational);
  CHECK(F("Kv_1^{1}(t)").threshold() == 1);
  CHECK(F("K_1^{0.75}p").threshold() == Q("3/4"));
}

TEST_CASE("syntax errors carry a position") {
  try {
    F("(p -> ");
    FAIL("expected a syntax error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::kSyntax);
    REQUIRE(e.position().has_value());
    CHECK(*e.position() <= 6);
  }
  CHECK(error_of([] { F("p q"); }) == Errc::kSyntax);
  CHECK(error_of([] { F(""); }) == Errc::kSyntax);
  CHECK(error_of([] { F("K_1^{1/2}"); }) == Errc::kSyntax);
}

TEST_CASE("printing") {
  CHECK(print(Formula::kv(Agent{1}, Q("3/5"), Term{"t"})) == "Kv_1^{3/5}(t)");
  CHECK(print(Formula::eq(Term{"t"}, Term{"s"})) == "t = s");
  CHECK(print(Formula::neg(Formula::atom("p"))) == "~p");
  CHECK(print(F("K_1^{1/2}p")) == "K_1^{1/2}p");
  CHECK(print(F(" ( p->q ) ")) == "(p -> q)");
  CHECK(error_of([] { F("p -> q"); }) == Errc::kSyntax);
}

TEST_CASE("derived connectives expand into the core") {
  CHECK(F("(p & q)") == F("~(p -> ~q)"));
  CHECK(F("(p | q)") == F("(~p -> q)"));
  CHECK(F("(p <-> q)") == F("~((p -> q) -> ~(q -> p))"));
  CHECK(F("T") == Formula::top());
  CHECK(F("F") == Formula::bottom());
}

TEST_CASE("modal depth") {
  CHECK(modal_depth(F("p")) == 0);
  CHECK(modal_depth(F("t = s")) == 0);
  CHECK(modal_depth(F("Kv_1^{3/5}(t)")) == 1);
  CHECK(modal_depth(F("K_1^{1/2}K_2^{1/3}p")) == 2);
  CHECK(modal_depth(F("(K_1^{1/2}p -> ~Kv_2^{1}(t))")) == 1);
}

TEST_CASE("property: round trip, depth recursion, Kv thresholds") {
  std::mt19937_64 rng(7);
  axioms::RandomFormulaOptions opts;
  opts.max_depth = 3;
  for (int n = 0; n < 2000; ++n) {
    Formula f = axioms::random_formula(rng, opts);
    Formula g = parse(print(f));
    REQUIRE(g == f);
    CHECK(print(g) == print(f));
    CHECK(modal_depth(Formula::k(Agent{1}, Q("1/3"), f)) == modal_depth(f) + 1);
    walk(f, [](const Formula& x) {
      if (x.is(Kind::kKv)) CHECK(x.threshold() > Q("1/2"));
    });
  }
}
