#pragma once

#include <limits>
#include <string>
#include <vector>

namespace qcc::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarKind { kContinuous, kInteger, kBinary };
enum class Sense { kLessEqual, kGreaterEqual, kEqual };

using VarId = int;
using RowId = int;

struct Variable {
  std::string name;
  VarKind kind = VarKind::kContinuous;
  double lower = 0.0;
  double upper = kInf;

  bool is_integral() const { return kind != VarKind::kContinuous; }
};

struct Term {
  VarId var;
  double coef;
};

struct Constraint {
  std::string name;
  std::vector<Term> terms;
  Sense sense = Sense::kLessEqual;
  double rhs = 0.0;
};

// A minimization program over bounded variables and linear rows. Programs are
// plain values; solvers never mutate them.
class LinearProgram {
 public:
  VarId add_variable(std::string name, VarKind kind, double lower,
                     double upper);
  VarId add_continuous(std::string name, double lower = 0.0,
                       double upper = kInf) {
    return add_variable(std::move(name), VarKind::kContinuous, lower, upper);
  }
  VarId add_integer(std::string name, double lower = 0.0,
                    double upper = kInf) {
    return add_variable(std::move(name), VarKind::kInteger, lower, upper);
  }
  VarId add_binary(std::string name) {
    return add_variable(std::move(name), VarKind::kBinary, 0.0, 1.0);
  }

  RowId add_constraint(std::string name, std::vector<Term> terms, Sense sense,
                       double rhs);

  void set_objective_coefficient(VarId var, double coef);
  void add_objective_coefficient(VarId var, double coef);
  void set_objective_constant(double constant) { objective_constant_ = constant; }
  void set_bounds(VarId var, double lower, double upper);
  void set_kind(VarId var, VarKind kind) { variables_.at(var).kind = kind; }

  int num_variables() const { return static_cast<int>(variables_.size()); }
  int num_constraints() const { return static_cast<int>(constraints_.size()); }

  const std::vector<Variable>& variables() const { return variables_; }
  const Variable& variable(VarId var) const { return variables_.at(var); }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const Constraint& constraint(RowId row) const { return constraints_.at(row); }
  const std::vector<double>& objective() const { return objective_; }
  double objective_constant() const { return objective_constant_; }

  // Objective value c'x + constant for a full assignment.
  double evaluate_objective(const std::vector<double>& values) const;

  // Largest violation of any row or bound by `values` (0 when feasible).
  double max_violation(const std::vector<double>& values) const;

  // Throws std::invalid_argument when a term references an undeclared
  // variable, bounds cross, or a coefficient is not finite.
  void validate() const;

 private:
  std::vector<Variable> variables_;
  std::vector<Constraint> constraints_;
  std::vector<double> objective_;
  double objective_constant_ = 0.0;
};

}  // namespace qcc::lp
