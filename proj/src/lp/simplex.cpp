#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "qcc/lp/solver.hpp"

namespace qcc::lp {

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal:
      return "optimal";
    case SolveStatus::kInfeasible:
      return "infeasible";
    case SolveStatus::kUnbounded:
      return "unbounded";
    case SolveStatus::kIterationLimit:
      return "iteration_limit";
    case SolveStatus::kNodeLimit:
      return "node_limit";
    case SolveStatus::kNumericalFailure:
      return "numerical_failure";
  }
  return "unknown";
}

namespace {

enum class ColState : std::uint8_t { kBasic, kAtLower, kAtUpper, kFreeZero };

constexpr double kDropTolerance = 1e-13;

// Columns are laid out as [structural | logical (one per row) | artificial].
// Every row i reads  a_i x + s_i (+ t_i) = b_i  where the logical s_i carries
// the row sense through its bounds.
class Tableau {
 public:
  Tableau(const LinearProgram& program, const std::vector<double>& lower,
          const std::vector<double>& upper, const SimplexOptions& options)
      : program_(program), options_(options) {
    n_ = program.num_variables();
    m_ = program.num_constraints();
    build(lower, upper);
  }

  LpSolution solve() {
    LpSolution result;
    iteration_limit_ = options_.iteration_limit > 0
                           ? options_.iteration_limit
                           : 50LL * (m_ + cols_) + 10000;

    if (num_artificial_ > 0) {
      set_phase_one_costs();
      const SolveStatus phase_one = iterate();
      if (phase_one == SolveStatus::kIterationLimit ||
          phase_one == SolveStatus::kNumericalFailure) {
        result.status = phase_one;
        result.iterations = iterations_;
        return result;
      }
      double infeasibility = 0.0;
      for (int j = n_ + m_; j < cols_; ++j) infeasibility += x_[j];
      if (infeasibility > 1e-6) {
        result.status = SolveStatus::kInfeasible;
        result.iterations = iterations_;
        return result;
      }
      retire_artificials();
    }

    set_phase_two_costs();
    const SolveStatus phase_two = iterate();
    result.iterations = iterations_;
    result.status = phase_two;
    if (phase_two != SolveStatus::kOptimal) return result;

    result.primal.assign(x_.begin(), x_.begin() + n_);
    for (int j = 0; j < n_; ++j) {
      result.primal[j] = std::clamp(result.primal[j], lower_[j], upper_[j]);
    }
    result.objective = program_.evaluate_objective(result.primal);
    result.reduced_costs.assign(d_.begin(), d_.begin() + n_);
    result.duals.resize(m_);
    double dual_objective = program_.objective_constant();
    for (int i = 0; i < m_; ++i) {
      result.duals[i] = -d_[n_ + i];
      dual_objective += program_.constraint(i).rhs * result.duals[i];
    }
    for (int j = 0; j < n_; ++j) {
      if (state_[j] != ColState::kBasic) dual_objective += d_[j] * x_[j];
    }
    result.dual_objective = dual_objective;
    if (program_.max_violation(result.primal) > 1e-5) {
      result.status = SolveStatus::kNumericalFailure;
    }
    return result;
  }

 private:
  double& at(int row, int col) {
    return table_[static_cast<std::size_t>(row) * cols_ + col];
  }

  void build(const std::vector<double>& lower,
             const std::vector<double>& upper) {
    // Nonbasic starting point for structurals.
    std::vector<double> start(n_);
    for (int j = 0; j < n_; ++j) {
      if (std::isfinite(lower[j])) {
        start[j] = lower[j];
      } else if (std::isfinite(upper[j])) {
        start[j] = upper[j];
      } else {
        start[j] = 0.0;
      }
    }

    // Residual each logical must absorb, and whether it fits its bounds.
    std::vector<double> residual(m_);
    std::vector<double> logical_lo(m_), logical_hi(m_);
    std::vector<int> sign(m_, 0);  // nonzero when the row needs an artificial
    for (int i = 0; i < m_; ++i) {
      const auto& row = program_.constraint(i);
      double activity = 0.0;
      for (const auto& term : row.terms) activity += term.coef * start[term.var];
      residual[i] = row.rhs - activity;
      switch (row.sense) {
        case Sense::kLessEqual:
          logical_lo[i] = 0.0;
          logical_hi[i] = kInf;
          break;
        case Sense::kGreaterEqual:
          logical_lo[i] = -kInf;
          logical_hi[i] = 0.0;
          break;
        case Sense::kEqual:
          logical_lo[i] = 0.0;
          logical_hi[i] = 0.0;
          break;
      }
      const double tol = options_.feasibility_tolerance;
      if (residual[i] < logical_lo[i] - tol) {
        sign[i] = -1;
      } else if (residual[i] > logical_hi[i] + tol) {
        sign[i] = 1;
      }
    }
    num_artificial_ = 0;
    for (int s : sign) num_artificial_ += (s != 0);
    cols_ = n_ + m_ + num_artificial_;

    lower_.assign(cols_, 0.0);
    upper_.assign(cols_, 0.0);
    x_.assign(cols_, 0.0);
    state_.assign(cols_, ColState::kAtLower);
    cost_.assign(cols_, 0.0);
    d_.assign(cols_, 0.0);
    basis_.assign(m_, -1);
    table_.assign(static_cast<std::size_t>(m_) * cols_, 0.0);

    for (int j = 0; j < n_; ++j) {
      lower_[j] = lower[j];
      upper_[j] = upper[j];
      x_[j] = start[j];
      if (std::isfinite(lower[j])) {
        state_[j] = ColState::kAtLower;
      } else if (std::isfinite(upper[j])) {
        state_[j] = ColState::kAtUpper;
      } else {
        state_[j] = ColState::kFreeZero;
      }
    }

    int next_artificial = n_ + m_;
    for (int i = 0; i < m_; ++i) {
      const int logical = n_ + i;
      lower_[logical] = logical_lo[i];
      upper_[logical] = logical_hi[i];
      const double scale = sign[i] == 0 ? 1.0 : static_cast<double>(sign[i]);
      for (const auto& term : program_.constraint(i).terms) {
        at(i, term.var) += scale * term.coef;
      }
      at(i, logical) = scale;
      if (sign[i] == 0) {
        basis_[i] = logical;
        state_[logical] = ColState::kBasic;
        x_[logical] = residual[i];
      } else {
        const double bound = sign[i] > 0 ? logical_hi[i] : logical_lo[i];
        x_[logical] = bound;
        state_[logical] =
            sign[i] > 0 ? ColState::kAtUpper : ColState::kAtLower;
        const int art = next_artificial++;
        lower_[art] = 0.0;
        upper_[art] = kInf;
        at(i, art) = 1.0;
        basis_[i] = art;
        state_[art] = ColState::kBasic;
        x_[art] = std::abs(residual[i] - bound);
      }
    }
  }

  void recompute_reduced_costs() {
    d_ = cost_;
    for (int i = 0; i < m_; ++i) {
      const double cb = cost_[basis_[i]];
      if (cb == 0.0) continue;
      const double* row = &table_[static_cast<std::size_t>(i) * cols_];
      for (int j = 0; j < cols_; ++j) d_[j] -= cb * row[j];
    }
    for (int i = 0; i < m_; ++i) d_[basis_[i]] = 0.0;
  }

  void set_phase_one_costs() {
    std::fill(cost_.begin(), cost_.end(), 0.0);
    for (int j = n_ + m_; j < cols_; ++j) cost_[j] = 1.0;
    recompute_reduced_costs();
  }

  void set_phase_two_costs() {
    std::fill(cost_.begin(), cost_.end(), 0.0);
    const auto& c = program_.objective();
    for (int j = 0; j < n_; ++j) cost_[j] = c[j];
    recompute_reduced_costs();
  }

  // Fixes artificials at zero and pivots basic ones out where possible. Rows
  // whose artificial cannot leave are redundant and keep it basic at zero.
  void retire_artificials() {
    for (int j = n_ + m_; j < cols_; ++j) {
      upper_[j] = 0.0;
      if (state_[j] != ColState::kBasic) {
        x_[j] = 0.0;
        state_[j] = ColState::kAtLower;
      }
    }
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_ + m_) continue;
      int best = -1;
      double best_abs = 1e-7;
      for (int j = 0; j < n_ + m_; ++j) {
        if (state_[j] == ColState::kBasic) continue;
        const double a = std::abs(at(i, j));
        if (a > best_abs) {
          best_abs = a;
          best = j;
        }
      }
      if (best < 0) {
        x_[basis_[i]] = 0.0;
        continue;
      }
      const int leaving = basis_[i];
      pivot(i, best);
      x_[leaving] = 0.0;
      state_[leaving] = ColState::kAtLower;
    }
  }

  // Chooses an entering column; returns -1 at optimality.
  int price(bool bland, int& direction) const {
    const double tol = options_.optimality_tolerance;
    int best = -1;
    double best_score = 0.0;
    for (int j = 0; j < cols_; ++j) {
      const ColState s = state_[j];
      if (s == ColState::kBasic) continue;
      if (lower_[j] == upper_[j]) continue;
      const double dj = d_[j];
      int dir = 0;
      if (s == ColState::kAtLower && dj < -tol) {
        dir = 1;
      } else if (s == ColState::kAtUpper && dj > tol) {
        dir = -1;
      } else if (s == ColState::kFreeZero && std::abs(dj) > tol) {
        dir = dj < 0 ? 1 : -1;
      }
      if (dir == 0) continue;
      if (bland) {
        direction = dir;
        return j;
      }
      if (std::abs(dj) > best_score) {
        best_score = std::abs(dj);
        best = j;
        direction = dir;
      }
    }
    return best;
  }

  // Harris two-pass ratio test. Returns the pivot row, or -1 when only the
  // entering column's own bound limits the step (or nothing does).
  int ratio_test(int q, int direction, bool bland, double& step) const {
    const double piv_tol = options_.pivot_tolerance;
    const double feas_tol = options_.feasibility_tolerance;
    double relaxed = kInf;
    for (int i = 0; i < m_; ++i) {
      const double a = table_[static_cast<std::size_t>(i) * cols_ + q];
      if (std::abs(a) <= piv_tol) continue;
      const int b = basis_[i];
      const double rate = -a * direction;
      double limit = kInf;
      if (rate < 0 && std::isfinite(lower_[b])) {
        limit = (x_[b] - lower_[b] + feas_tol) / -rate;
      } else if (rate > 0 && std::isfinite(upper_[b])) {
        limit = (upper_[b] - x_[b] + feas_tol) / rate;
      }
      relaxed = std::min(relaxed, limit);
    }

    int row = -1;
    double row_step = kInf;
    double best_abs = 0.0;
    for (int i = 0; i < m_; ++i) {
      const double a = table_[static_cast<std::size_t>(i) * cols_ + q];
      if (std::abs(a) <= piv_tol) continue;
      const int b = basis_[i];
      const double rate = -a * direction;
      double exact = kInf;
      if (rate < 0 && std::isfinite(lower_[b])) {
        exact = (x_[b] - lower_[b]) / -rate;
      } else if (rate > 0 && std::isfinite(upper_[b])) {
        exact = (upper_[b] - x_[b]) / rate;
      }
      if (!std::isfinite(exact) || exact > relaxed) continue;
      exact = std::max(exact, 0.0);
      bool take = false;
      if (row < 0) {
        take = true;
      } else if (bland) {
        take = exact < row_step - 1e-12 ||
               (exact <= row_step + 1e-12 && basis_[i] < basis_[row]);
      } else {
        take = std::abs(a) > best_abs;
      }
      if (take) {
        row = i;
        row_step = exact;
        best_abs = std::abs(a);
      }
    }

    const double range = upper_[q] - lower_[q];
    if (std::isfinite(range) && range <= row_step) {
      step = range;
      return -1;
    }
    step = row_step;
    return row;
  }

  void pivot(int r, int q) {
    double* prow = &table_[static_cast<std::size_t>(r) * cols_];
    const double inv = 1.0 / prow[q];
    nonzeros_.clear();
    for (int j = 0; j < cols_; ++j) {
      if (prow[j] == 0.0) continue;
      prow[j] *= inv;
      if (std::abs(prow[j]) < kDropTolerance) {
        prow[j] = 0.0;
      } else {
        nonzeros_.push_back(j);
      }
    }
    prow[q] = 1.0;
    for (int i = 0; i < m_; ++i) {
      if (i == r) continue;
      double* row = &table_[static_cast<std::size_t>(i) * cols_];
      const double a = row[q];
      if (a == 0.0) continue;
      for (int j : nonzeros_) {
        double v = row[j] - a * prow[j];
        row[j] = std::abs(v) < kDropTolerance ? 0.0 : v;
      }
      row[q] = 0.0;
    }
    const double dq = d_[q];
    if (dq != 0.0) {
      for (int j : nonzeros_) d_[j] -= dq * prow[j];
      d_[q] = 0.0;
    }
    const int leaving = basis_[r];
    basis_[r] = q;
    state_[q] = ColState::kBasic;
    (void)leaving;
  }

  SolveStatus iterate() {
    int degenerate_run = 0;
    bool bland = false;
    while (true) {
      if (iterations_ >= iteration_limit_) return SolveStatus::kIterationLimit;
      int direction = 0;
      const int q = price(bland, direction);
      if (q < 0) return SolveStatus::kOptimal;

      double step = 0.0;
      const int r = ratio_test(q, direction, bland, step);
      if (!std::isfinite(step)) return SolveStatus::kUnbounded;
      ++iterations_;

      // Move along the edge.
      if (step > 0.0) {
        x_[q] += direction * step;
        for (int i = 0; i < m_; ++i) {
          const double a = table_[static_cast<std::size_t>(i) * cols_ + q];
          if (a != 0.0) x_[basis_[i]] -= a * direction * step;
        }
      }

      if (r < 0) {
        // Bound flip.
        if (direction > 0) {
          x_[q] = upper_[q];
          state_[q] = ColState::kAtUpper;
        } else {
          x_[q] = lower_[q];
          state_[q] = ColState::kAtLower;
        }
      } else {
        const int leaving = basis_[r];
        const double a = table_[static_cast<std::size_t>(r) * cols_ + q];
        const double rate = -a * direction;
        if (rate < 0) {
          x_[leaving] = lower_[leaving];
          state_[leaving] = ColState::kAtLower;
        } else {
          x_[leaving] = upper_[leaving];
          state_[leaving] = ColState::kAtUpper;
        }
        if (!std::isfinite(x_[leaving])) return SolveStatus::kNumericalFailure;
        pivot(r, q);
      }

      if (step <= 1e-12) {
        if (++degenerate_run > options_.degenerate_pivot_limit) bland = true;
      } else {
        degenerate_run = 0;
        bland = false;
      }
    }
  }

  const LinearProgram& program_;
  const SimplexOptions& options_;
  int n_ = 0;
  int m_ = 0;
  int cols_ = 0;
  int num_artificial_ = 0;
  std::int64_t iterations_ = 0;
  std::int64_t iteration_limit_ = 0;

  std::vector<double> table_;
  std::vector<double> lower_, upper_, x_, cost_, d_;
  std::vector<ColState> state_;
  std::vector<int> basis_;
  std::vector<int> nonzeros_;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& program,
                    const std::vector<double>& lower,
                    const std::vector<double>& upper,
                    const SimplexOptions& options) {
  for (std::size_t j = 0; j < lower.size(); ++j) {
    if (lower[j] > upper[j] + options.feasibility_tolerance) {
      LpSolution infeasible;
      infeasible.status = SolveStatus::kInfeasible;
      return infeasible;
    }
  }
  Tableau tableau(program, lower, upper, options);
  return tableau.solve();
}

LpSolution solve_lp(const LinearProgram& program,
                    const SimplexOptions& options) {
  program.validate();
  std::vector<double> lower, upper;
  lower.reserve(program.num_variables());
  upper.reserve(program.num_variables());
  for (const auto& v : program.variables()) {
    lower.push_back(v.lower);
    upper.push_back(v.upper);
  }
  return solve_lp(program, lower, upper, options);
}

}  // namespace qcc::lp
