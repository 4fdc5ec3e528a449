#include <random>

#include "doctest.h"
#include "ptkv/lp.hpp"
#include "support.hpp"

using namespace ptkv;
using namespace ptkv::lp;
using testing::error_of;
using testing::Q;

namespace {

// One variable x with rows (coefficient, relation, rhs).
LinearSystem one_var(std::vector<std::tuple<int, Relation, Rat>> rows, bool nonneg = true) {
  LinearSystem s;
  s.nonneg = nonneg;
  s.add_variable("x");
  for (auto& [c, rel, rhs] : rows) s.add_row({{0, Rat(c)}}, rel, rhs);
  return s;
}

LinearSystem random_system(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nv(1, 4), nr(1, 6), coef(-2, 2), den(1, 4), num(-8, 8),
      rel(0, 2), flag(0, 1);
  LinearSystem s;
  s.nonneg = flag(rng) == 1;
  const int n = nv(rng);
  for (int j = 0; j < n; ++j) s.add_variable("x" + std::to_string(j));
  const int m = nr(rng);
  for (int i = 0; i < m; ++i) {
    std::vector<std::pair<std::size_t, Rat>> c;
    for (int j = 0; j < n; ++j) {
      int a = coef(rng);
      if (a != 0) c.emplace_back(j, Rat(a));
    }
    s.add_row(std::move(c), static_cast<Relation>(rel(rng)), ratio(num(rng), den(rng)));
  }
  return s;
}

}  // namespace

TEST_CASE("closed feasibility") {
  auto w = feasible_closed(one_var({{1, Relation::kGE, Q("3/5")}, {-1, Relation::kGE, Q("-1")}}));
  REQUIRE(w);
  CHECK(w->assignment[0] >= Q("3/5"));
  CHECK(w->assignment[0] <= 1);
  CHECK(!feasible_closed(one_var({{1, Relation::kGE, Q("3/5")}, {-1, Relation::kGE, Q("-1/2")}})));

  LinearSystem simplex;
  for (int j = 0; j < 3; ++j) simplex.add_variable("z" + std::to_string(j));
  simplex.add_row({{0, Rat(1)}, {1, Rat(1)}, {2, Rat(1)}}, Relation::kEQ, Rat(1));
  auto z = feasible_closed(simplex);
  REQUIRE(z);
  CHECK(check_witness(simplex, *z));
}

TEST_CASE("mixed feasibility") {
  // x >= 3/5, x < 1/2
  CHECK(!feasible_mixed(one_var({{1, Relation::kGE, Q("3/5")}, {-1, Relation::kGT, Q("-1/2")}})));
  // 3/10 <= x < 1/2
  LinearSystem s = one_var({{1, Relation::kGE, Q("3/10")}, {-1, Relation::kGT, Q("-1/2")}});
  auto w = feasible_mixed(s);
  REQUIRE(w);
  CHECK(w->assignment[0] >= Q("3/10"));
  CHECK(w->assignment[0] < Q("1/2"));
  CHECK(fm_oracle(s));
  // Implicit equality: x = 1/2 and x > 1/2.
  LinearSystem imp = one_var({{1, Relation::kGE, Q("1/2")},
                              {-1, Relation::kGE, Q("-1/2")},
                              {1, Relation::kGT, Q("1/2")}});
  MixedResult r = solve_mixed(imp);
  CHECK(r.closed_feasible);
  CHECK(r.delta == 0);
  CHECK(!r.witness);
  CHECK(!fm_oracle(imp));
}

TEST_CASE("Fourier-Motzkin oracle") {
  CHECK(!fm_oracle(one_var({{1, Relation::kGT, Q("0")}, {-1, Relation::kGT, Q("0")}}, false)));

  LinearSystem two;
  two.add_variable("x");
  two.add_variable("y");
  two.add_row({{0, Rat(1)}, {1, Rat(1)}}, Relation::kEQ, Rat(1));
  LinearSystem both = two;
  both.add_row({{0, Rat(1)}}, Relation::kGT, Q("1/2"));
  both.add_row({{1, Rat(1)}}, Relation::kGT, Q("1/2"));
  CHECK(!fm_oracle(both));
  LinearSystem one = two;
  one.add_row({{0, Rat(1)}}, Relation::kGT, Q("1/2"));
  CHECK(fm_oracle(one));
  CHECK(feasible_mixed(one));

  LinearSystem big;
  for (int j = 0; j < 9; ++j) big.add_variable("v" + std::to_string(j));
  CHECK(error_of([&] { fm_oracle(big); }) == Errc::kTooManyVariables);
}

TEST_CASE("free variables") {
  // x <= -1 is infeasible only under nonnegativity.
  LinearSystem s = one_var({{-1, Relation::kGE, Q("1")}}, false);
  auto w = feasible_mixed(s);
  REQUIRE(w);
  CHECK(w->assignment[0] <= -1);
  s.nonneg = true;
  CHECK(!feasible_mixed(s));
}

TEST_CASE("property: simplex agrees with Fourier-Motzkin") {
  std::mt19937_64 rng(99);
  for (int n = 0; n < 1000; ++n) {
    LinearSystem s = random_system(rng);
    MixedResult r = solve_mixed(s);
    const bool oracle = fm_oracle(s);
    REQUIRE(r.witness.has_value() == oracle);
    if (r.witness) {
      CHECK(check_witness(s, *r.witness));
      CHECK(feasible_closed(s).has_value());
    }
    if (r.closed_feasible && !r.witness) CHECK(r.delta == 0);
    if (auto c = feasible_closed(s)) {
      LinearSystem relaxed = s;
      for (Row& row : relaxed.rows) {
        if (row.relation == Relation::kGT) row.relation = Relation::kGE;
      }
      CHECK(check_witness(relaxed, *c));
    }
  }
}

TEST_CASE("system JSON uses exact rationals") {
  nlohmann::json j = system_to_json(one_var({{1, Relation::kGT, Q("3/5")}}));
  CHECK(j["rows"][0]["rhs"] == "3/5");
  CHECK(j["rows"][0]["rel"] == ">");
  CHECK(j["rows"][0]["coeffs"]["x"] == "1/1");
}
