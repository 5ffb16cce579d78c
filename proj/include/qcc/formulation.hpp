#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcc/instance.hpp"
#include "qcc/lp/linear_program.hpp"
#include "qcc/lp/solver.hpp"
#include "qcc/plan.hpp"
#include "qcc/scenario.hpp"

namespace qcc {

// Raised when some request has no source-destination path over links whose
// fidelity requirement can be met in every scenario.
class InfeasibleModelError : public std::runtime_error {
 public:
  InfeasibleModelError(const std::string& request, std::vector<std::string> blocked);
  const std::string& request() const { return request_; }
  // Links that cannot reach the fidelity target, as "from->to".
  const std::vector<std::string>& blocked_links() const { return blocked_; }

 private:
  std::string request_;
  std::vector<std::string> blocked_;
};

enum class ModelMode { kStochastic, kExpectedValue, kPerfectInformation };

struct ModelOptions {
  ModelMode mode = ModelMode::kStochastic;
  // Scenario kept in perfect-information mode.
  int scenario = 0;
  bool include_pairs = true;
  bool include_qubits = true;
  // Forces the total of reserved pairs over all links and requests.
  std::optional<int> total_reserved_pairs;
  // Fixes routes only.
  std::optional<std::vector<std::vector<int>>> fixed_routes;
  // Fixes every first-stage decision: routes, reserved pairs, machine
  // assignment and reserved qubits.
  std::optional<PlanSolution> fixed_first_stage;
};

enum class Symbol {
  kRoute,
  kPairsReserved,
  kPairsUtilized,
  kPairsOndemand,
  kAssignment,
  kQubitsReserved,
  kQubitsUtilized,
  kQubitsOndemand,
  kOverwait,
};

const char* to_string(Symbol symbol);

// Solver ids of every decision variable. -1 marks an absent variable (a
// half of the model that was not built).
struct VariableMap {
  struct Entry {
    Symbol symbol;
    int scenario;  // -1 for first-stage symbols
    int request;   // pair symbols
    int link;      // pair symbols
    int slot;      // qubit symbols
  };

  std::vector<std::vector<int>> route;           // [request][link]
  std::vector<std::vector<int>> pairs_reserved;  // [request][link]
  std::vector<std::vector<std::vector<int>>> pairs_utilized;  // [scenario][request][link]
  std::vector<std::vector<std::vector<int>>> pairs_ondemand;
  std::vector<int> assignment;       // [slot]
  std::vector<int> qubits_reserved;  // [slot]
  std::vector<std::vector<int>> qubits_utilized;  // [scenario][slot]
  std::vector<std::vector<int>> qubits_ondemand;
  std::vector<std::vector<int>> overwait;

  // Indexed by solver id.
  std::vector<Entry> entries;

  int count(Symbol symbol) const;
};

struct Model {
  lp::LinearProgram program;
  VariableMap vars;
  // Scenario space the program was built over (one scenario for the
  // expected-value and perfect-information modes).
  ScenarioSpace space;
  std::vector<QubitSlot> slots;
  // Minimum utilized plus on-demand pairs on a routed link,
  // [scenario][request][link]; -1 when the target is out of reach.
  std::vector<std::vector<std::vector<int>>> required_pairs;
  bool include_pairs = true;
  bool include_qubits = true;
};

// Pairs needed on `link` so the purified fidelity meets both `demand` and the
// link threshold, capped by the link's total capacity. -1 if impossible.
int required_pairs(const Instance& instance, int link, double demand);

ScenarioSpace effective_space(const ScenarioSpace& space, ModelMode mode, int scenario);

Model build_model(const Instance& instance, const ScenarioSpace& space,
                  const ModelOptions& options = {});

// Throws std::invalid_argument unless the solution carries an incumbent.
// Routed links off the source-destination path (isolated cycles) are cleared.
PlanSolution extract_solution(const lp::MilpSolution& solution, const Model& model,
                              const Instance& instance);

struct DirectResult {
  lp::SolveStatus status = lp::SolveStatus::kInfeasible;
  PlanSolution plan;  // valid when status is optimal
  double objective = 0.0;
  std::int64_t nodes = 0;
  Model model;
};

lp::MilpOptions default_milp_options();

DirectResult solve_direct(const Instance& instance, const ScenarioSpace& space,
                          const ModelOptions& options = {},
                          const lp::MilpOptions& milp = default_milp_options());

struct FirstStageEvaluation {
  bool feasible = false;
  std::vector<int> infeasible_scenarios;
  // First stage as given, recourse re-optimized per scenario.
  PlanSolution plan;
  double total = 0.0;
};

FirstStageEvaluation evaluate_first_stage_against(const PlanSolution& first_stage,
                                                  const Instance& instance,
                                                  const ScenarioSpace& space);

}  // namespace qcc
