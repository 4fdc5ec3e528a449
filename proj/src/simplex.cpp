#include <algorithm>

#include "ptkv/error.hpp"
#include "ptkv/lp.hpp"

namespace ptkv::lp {

Rat Row::lhs_at(const std::vector<Rat>& x) const {
  Rat sum = 0;
  for (const auto& [j, a] : coeffs) sum += a * x.at(j);
  return sum;
}

std::size_t LinearSystem::add_variable(std::string name) {
  variables.push_back(std::move(name));
  return variables.size() - 1;
}

void LinearSystem::add_row(std::vector<std::pair<std::size_t, Rat>> coeffs,
                           Relation rel, Rat rhs) {
  rows.push_back(Row{std::move(coeffs), rel, std::move(rhs)});
}

bool LinearSystem::well_formed() const {
  for (const Row& r : rows) {
    for (const auto& [j, a] : r.coeffs) {
      if (j >= variables.size()) return false;
    }
  }
  return true;
}

bool check_witness(const LinearSystem& sys, const Witness& w) {
  if (w.assignment.size() != sys.variables.size()) return false;
  if (sys.nonneg) {
    for (const Rat& x : w.assignment) {
      if (x < 0) return false;
    }
  }
  for (const Row& r : sys.rows) {
    Rat lhs = r.lhs_at(w.assignment);
    switch (r.relation) {
      case Relation::kGE: if (!(lhs >= r.rhs)) return false; break;
      case Relation::kGT: if (!(lhs > r.rhs)) return false; break;
      case Relation::kEQ: if (lhs != r.rhs) return false; break;
    }
  }
  return true;
}

namespace {

enum class Status { kInfeasible, kOptimal, kUnbounded };

// Dense two-phase simplex over exact rationals: minimize c.x subject to
// A x = b, x >= 0. Bland's rule on both phases.
class Tableau {
 public:
  Tableau(std::vector<std::vector<Rat>> a, std::vector<Rat> b, std::vector<Rat> c)
      : m_(a.size()), n_(c.size()), cost_(std::move(c)) {
    rows_.resize(m_);
    rhs_.resize(m_);
    basis_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      const bool flip = b[i] < 0;
      rows_[i].assign(n_ + m_, Rat(0));
      for (std::size_t j = 0; j < n_; ++j) {
        rows_[i][j] = flip ? Rat(-a[i][j]) : a[i][j];
      }
      rows_[i][n_ + i] = 1;
      rhs_[i] = flip ? Rat(-b[i]) : b[i];
      basis_[i] = n_ + i;
    }
  }

  Status solve() {
    // Phase 1: minimize the sum of artificials.
    obj_.assign(n_ + m_, Rat(0));
    obj_rhs_ = 0;
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) obj_[j] -= rows_[i][j];
      obj_rhs_ -= rhs_[i];
    }
    run(n_ + m_);
    if (obj_rhs_ != 0) return Status::kInfeasible;
    drive_out_artificials();

    // Phase 2 on the original costs; artificials may not re-enter.
    obj_.assign(n_ + m_, Rat(0));
    for (std::size_t j = 0; j < n_; ++j) obj_[j] = cost_[j];
    obj_rhs_ = 0;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const Rat& cb = basis_[i] < n_ ? cost_[basis_[i]] : kZero;
      if (cb == 0) continue;
      for (std::size_t j = 0; j < n_ + m_; ++j) {
        if (sgn(rows_[i][j]) != 0) obj_[j] -= cb * rows_[i][j];
      }
      obj_rhs_ -= cb * rhs_[i];
    }
    return run(n_) ? Status::kOptimal : Status::kUnbounded;
  }

  std::vector<Rat> primal() const {
    std::vector<Rat> x(n_, Rat(0));
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (basis_[i] < n_) x[basis_[i]] = rhs_[i];
    }
    return x;
  }

 private:
  // Returns false when unbounded. Entering columns are limited to [0, limit).
  bool run(std::size_t limit) {
    for (;;) {
      std::size_t enter = limit;
      for (std::size_t j = 0; j < limit; ++j) {
        if (sgn(obj_[j]) < 0) {
          enter = j;
          break;
        }
      }
      if (enter == limit) return true;
      std::size_t leave = rows_.size();
      Rat best;
      for (std::size_t i = 0; i < rows_.size(); ++i) {
        if (sgn(rows_[i][enter]) <= 0) continue;
        Rat ratio = rhs_[i] / rows_[i][enter];
        if (leave == rows_.size() || ratio < best ||
            (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == rows_.size()) return false;
      pivot(leave, enter);
    }
  }

  void pivot(std::size_t r, std::size_t c) {
    const Rat inv = 1 / rows_[r][c];
    for (auto& v : rows_[r]) {
      if (sgn(v) != 0) v *= inv;
    }
    rhs_[r] *= inv;
    auto eliminate = [&](std::vector<Rat>& row, Rat& rhs) {
      if (sgn(row[c]) == 0) return;
      const Rat factor = row[c];
      for (std::size_t j = 0; j < row.size(); ++j) {
        if (sgn(rows_[r][j]) != 0) row[j] -= factor * rows_[r][j];
      }
      rhs -= factor * rhs_[r];
    };
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (i != r) eliminate(rows_[i], rhs_[i]);
    }
    eliminate(obj_, obj_rhs_);
    basis_[r] = c;
  }

  void drive_out_artificials() {
    for (std::size_t i = 0; i < rows_.size();) {
      if (basis_[i] < n_) {
        ++i;
        continue;
      }
      std::size_t col = n_;
      for (std::size_t j = 0; j < n_; ++j) {
        if (sgn(rows_[i][j]) != 0) {
          col = j;
          break;
        }
      }
      if (col == n_) {
        // Redundant equality row.
        rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(i));
        rhs_.erase(rhs_.begin() + static_cast<std::ptrdiff_t>(i));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
        continue;
      }
      pivot(i, col);
      ++i;
    }
  }

  static inline const Rat kZero{0};
  std::size_t m_, n_;
  std::vector<Rat> cost_;
  std::vector<std::vector<Rat>> rows_;
  std::vector<Rat> rhs_;
  std::vector<std::size_t> basis_;
  std::vector<Rat> obj_;
  Rat obj_rhs_;
};

struct Solved {
  Status status;
  std::vector<Rat> x;  // original variables
  Rat delta;
};

// Builds the standard form. With `with_delta`, strict rows become
// a.x - delta >= b and the objective maximizes delta <= 1; otherwise strict
// rows are relaxed to >=.
Solved solve_system(const LinearSystem& sys, bool with_delta) {
  const std::size_t nv = sys.variables.size();
  // Column layout: x (or x+ / x- when free), delta, one surplus per
  // inequality row, one slack for delta <= 1.
  const std::size_t x_cols = sys.nonneg ? nv : 2 * nv;
  std::size_t ineq = 0;
  for (const Row& r : sys.rows) {
    if (r.relation != Relation::kEQ) ++ineq;
  }
  const std::size_t delta_col = x_cols;
  const std::size_t first_surplus = x_cols + (with_delta ? 1 : 0);
  const std::size_t cap_col = first_surplus + ineq;
  const std::size_t ncols = cap_col + (with_delta ? 1 : 0);
  const std::size_t nrows = sys.rows.size() + (with_delta ? 1 : 0);

  std::vector<std::vector<Rat>> a(nrows, std::vector<Rat>(ncols, Rat(0)));
  std::vector<Rat> b(nrows, Rat(0));
  std::size_t surplus = first_surplus;
  for (std::size_t i = 0; i < sys.rows.size(); ++i) {
    const Row& r = sys.rows[i];
    for (const auto& [j, coef] : r.coeffs) {
      a[i][j] += coef;
      if (!sys.nonneg) a[i][nv + j] -= coef;
    }
    if (r.relation != Relation::kEQ) a[i][surplus++] = -1;
    if (with_delta && r.relation == Relation::kGT) a[i][delta_col] = -1;
    b[i] = r.rhs;
  }
  std::vector<Rat> c(ncols, Rat(0));
  if (with_delta) {
    a[nrows - 1][delta_col] = 1;
    a[nrows - 1][cap_col] = 1;
    b[nrows - 1] = 1;
    c[delta_col] = -1;
  }

  Tableau t(std::move(a), std::move(b), std::move(c));
  Solved out{t.solve(), {}, Rat(0)};
  if (out.status != Status::kOptimal) return out;
  std::vector<Rat> z = t.primal();
  out.x.assign(nv, Rat(0));
  for (std::size_t j = 0; j < nv; ++j) {
    out.x[j] = sys.nonneg ? z[j] : Rat(z[j] - z[nv + j]);
  }
  if (with_delta) out.delta = z[delta_col];
  return out;
}

}  // namespace

std::optional<Witness> feasible_closed(const LinearSystem& sys) {
  Solved s = solve_system(sys, false);
  if (s.status == Status::kInfeasible) return std::nullopt;
  return Witness{std::move(s.x)};
}

MixedResult solve_mixed(const LinearSystem& sys) {
  MixedResult out;
  Solved s = solve_system(sys, true);
  if (s.status == Status::kInfeasible) return out;
  if (s.status == Status::kUnbounded) {
    throw Error(Errc::kInternal, "delta objective unbounded despite cap");
  }
  out.closed_feasible = true;
  out.delta = s.delta;
  if (s.delta > 0) out.witness = Witness{std::move(s.x)};
  return out;
}

nlohmann::json system_to_json(const LinearSystem& sys) {
  nlohmann::json rows = nlohmann::json::array();
  for (const Row& r : sys.rows) {
    nlohmann::json coeffs = nlohmann::json::object();
    for (const auto& [j, a] : r.coeffs) {
      coeffs[sys.variables.at(j)] = rat_to_json_string(a);
    }
    const char* rel = r.relation == Relation::kGE   ? ">="
                      : r.relation == Relation::kGT ? ">"
                                                    : "=";
    rows.push_back({{"coeffs", coeffs}, {"rel", rel}, {"rhs", rat_to_json_string(r.rhs)}});
  }
  return {{"variables", sys.variables}, {"rows", rows}, {"nonneg", sys.nonneg}};
}

}  // namespace ptkv::lp
