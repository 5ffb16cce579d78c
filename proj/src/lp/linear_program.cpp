#include "qcc/lp/linear_program.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qcc::lp {

VarId LinearProgram::add_variable(std::string name, VarKind kind, double lower,
                                  double upper) {
  if (kind == VarKind::kBinary) {
    lower = std::max(lower, 0.0);
    upper = std::min(upper, 1.0);
  }
  variables_.push_back({std::move(name), kind, lower, upper});
  objective_.push_back(0.0);
  return static_cast<VarId>(variables_.size() - 1);
}

RowId LinearProgram::add_constraint(std::string name, std::vector<Term> terms,
                                    Sense sense, double rhs) {
  constraints_.push_back({std::move(name), std::move(terms), sense, rhs});
  return static_cast<RowId>(constraints_.size() - 1);
}

void LinearProgram::set_objective_coefficient(VarId var, double coef) {
  objective_.at(var) = coef;
}

void LinearProgram::add_objective_coefficient(VarId var, double coef) {
  objective_.at(var) += coef;
}

void LinearProgram::set_bounds(VarId var, double lower, double upper) {
  auto& v = variables_.at(var);
  v.lower = lower;
  v.upper = upper;
}

double LinearProgram::evaluate_objective(
    const std::vector<double>& values) const {
  double total = objective_constant_;
  for (std::size_t j = 0; j < objective_.size(); ++j) {
    total += objective_[j] * values.at(j);
  }
  return total;
}

double LinearProgram::max_violation(const std::vector<double>& values) const {
  double worst = 0.0;
  for (std::size_t j = 0; j < variables_.size(); ++j) {
    worst = std::max(worst, variables_[j].lower - values[j]);
    worst = std::max(worst, values[j] - variables_[j].upper);
  }
  for (const auto& row : constraints_) {
    double activity = 0.0;
    for (const auto& term : row.terms) activity += term.coef * values[term.var];
    switch (row.sense) {
      case Sense::kLessEqual:
        worst = std::max(worst, activity - row.rhs);
        break;
      case Sense::kGreaterEqual:
        worst = std::max(worst, row.rhs - activity);
        break;
      case Sense::kEqual:
        worst = std::max(worst, std::abs(activity - row.rhs));
        break;
    }
  }
  return worst;
}

void LinearProgram::validate() const {
  const auto n = static_cast<VarId>(variables_.size());
  for (const auto& v : variables_) {
    if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower > v.upper) {
      throw std::invalid_argument("variable '" + v.name +
                                  "' has crossing or NaN bounds");
    }
  }
  for (double c : objective_) {
    if (!std::isfinite(c)) {
      throw std::invalid_argument("objective coefficient is not finite");
    }
  }
  for (const auto& row : constraints_) {
    if (!std::isfinite(row.rhs)) {
      throw std::invalid_argument("constraint '" + row.name +
                                  "' has a non-finite right-hand side");
    }
    for (const auto& term : row.terms) {
      if (term.var < 0 || term.var >= n) {
        throw std::invalid_argument("constraint '" + row.name +
                                    "' references an undeclared variable");
      }
      if (!std::isfinite(term.coef)) {
        throw std::invalid_argument("constraint '" + row.name +
                                    "' has a non-finite coefficient");
      }
    }
  }
}

}  // namespace qcc::lp
