#include <compare>
#include <set>

#include "ptkv/error.hpp"
#include "ptkv/lp.hpp"

namespace ptkv::lp {

namespace {

// a.x >= b, or a.x > b when strict.
struct Ineq {
  std::vector<Rat> a;
  Rat b;
  bool strict = false;

  std::strong_ordering operator<=>(const Ineq& o) const {
    if (auto c = strict <=> o.strict; c != 0) return c;
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (int c = cmp(a[j], o.a[j]); c != 0) return c <=> 0;
    }
    return cmp(b, o.b) <=> 0;
  }
  bool operator==(const Ineq& o) const { return (*this <=> o) == 0; }
};

// Scales so the first nonzero coefficient has magnitude 1.
void normalize(Ineq& q) {
  for (const Rat& v : q.a) {
    if (sgn(v) != 0) {
      Rat s = abs(v);
      for (Rat& x : q.a) x /= s;
      q.b /= s;
      return;
    }
  }
}

bool trivially_false(const Ineq& q) {
  for (const Rat& v : q.a) {
    if (sgn(v) != 0) return false;
  }
  return q.strict ? !(0 > q.b) : !(0 >= q.b);
}

}  // namespace

bool fm_oracle(const LinearSystem& sys) {
  const std::size_t n = sys.variables.size();
  if (n > kFmMaxVariables) {
    throw Error(Errc::kTooManyVariables,
                "Fourier-Motzkin oracle limited to " +
                    std::to_string(kFmMaxVariables) + " variables");
  }
  std::set<Ineq> current;
  auto add = [&](Ineq q) {
    normalize(q);
    current.insert(std::move(q));
  };
  for (const Row& r : sys.rows) {
    Ineq q{std::vector<Rat>(n, Rat(0)), r.rhs, r.relation == Relation::kGT};
    for (const auto& [j, c] : r.coeffs) q.a.at(j) += c;
    if (r.relation == Relation::kEQ) {
      Ineq neg{q.a, -q.b, false};
      for (Rat& x : neg.a) x = -x;
      add(std::move(neg));
    }
    add(std::move(q));
  }
  if (sys.nonneg) {
    for (std::size_t j = 0; j < n; ++j) {
      Ineq q{std::vector<Rat>(n, Rat(0)), Rat(0), false};
      q.a[j] = 1;
      add(std::move(q));
    }
  }

  for (std::size_t j = 0; j < n; ++j) {
    std::vector<Ineq> pos, neg;
    std::set<Ineq> next;
    for (const Ineq& q : current) {
      int s = sgn(q.a[j]);
      if (s > 0) pos.push_back(q);
      else if (s < 0) neg.push_back(q);
      else next.insert(q);
    }
    for (const Ineq& p : pos) {
      for (const Ineq& q : neg) {
        // p.a[j] = 1 and q.a[j] = -1 after normalization on column j is not
        // guaranteed, so scale explicitly.
        Rat sp = 1 / p.a[j];
        Rat sq = -1 / q.a[j];
        Ineq r{std::vector<Rat>(n, Rat(0)), p.b * sp + q.b * sq,
               p.strict || q.strict};
        for (std::size_t k = 0; k < n; ++k) r.a[k] = p.a[k] * sp + q.a[k] * sq;
        r.a[j] = 0;
        normalize(r);
        next.insert(std::move(r));
      }
    }
    current = std::move(next);
  }
  for (const Ineq& q : current) {
    if (trivially_false(q)) return false;
  }
  return true;
}

}  // namespace ptkv::lp
