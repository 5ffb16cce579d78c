#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qcc/benders.hpp"
#include "qcc/formulation.hpp"
#include "qcc/instance.hpp"
#include "qcc/scenario.hpp"

namespace qcc {

// Version tag written in the first line of every CSV report.
inline constexpr const char* kCsvSchema = "qcc-csv/1";

// Demand grids the preset samples from.
struct DemandRanges {
  std::vector<double> fidelity;  // 0.55, 0.60, ..., 1.00
  std::vector<int> qubits;       // 10 .. 22
  std::vector<double> wait;      // 0.001, 0.002, ..., 0.009
};
DemandRanges preset_demand_ranges();

// NSFNET with the published prices and capacities: 14 nodes, 21 fibers,
// 3 providers with 2 machines of 30 qubits each, and `num_requests` requests
// (at most 6) each running one 14-qubit QFT circuit.
Instance run_preset_defaults(int num_requests = 3);

// Samples `num_scenarios` joint scenarios from the preset ranges. The count
// is factored into primes; each factor becomes the number of sampled values
// of one (request, circuit, dimension), dimensions taken round-robin.
// Uniform weights.
ScenarioSpace preset_scenarios(const Instance& instance, int num_scenarios,
                               std::uint64_t seed);

// The bundled single-request chain used for pair-saturation experiments:
// 1 -> 2 -> 3 where 2 -> 3 has base fidelity 0.55.
Instance saturation_chain();

enum class SweepVariable {
  kReservedPairs,
  kFidelityDemand,
  kReservationPrice,
  kPenaltyPrice,
  kWaitingTime,
  kRequestCount,
};

std::optional<SweepVariable> parse_sweep_variable(const std::string& name);
const char* to_string(SweepVariable variable);

enum class PlanMode { kStochastic, kExpectedValue, kDeterministic, kBenders };

std::optional<PlanMode> parse_plan_mode(const std::string& name);
const char* to_string(PlanMode mode);

struct SweepRange {
  double start = 0.0;
  double stop = 0.0;
  double step = 1.0;

  // Inclusive grid; throws std::invalid_argument on empty or bad ranges.
  std::vector<double> values() const;
};

// Parses "A:B:STEP" (or "A:B", step 1, or a single value).
SweepRange parse_range(const std::string& text);

struct ExperimentSpec {
  // Either a preset name ("nsfnet", "chain") or an explicit instance.
  std::string preset = "nsfnet";
  std::optional<Instance> instance;
  std::optional<ScenarioSpace> scenarios;

  SweepVariable variable = SweepVariable::kReservedPairs;
  SweepRange range;
  // Other variables held at one value, e.g. the second axis of a grid.
  std::vector<std::pair<SweepVariable, double>> fixed;
  std::vector<PlanMode> modes{PlanMode::kStochastic};
  int requests = 1;
  int num_scenarios = 2;
  std::uint64_t seed = 1;
  BendersConfig benders;
};

// Decision totals of a plan. Recourse quantities are expectations over the
// scenario space; peak_utilized_pairs is the largest single utilized count.
// ondemand_cost is the part of the second stage spent on on-demand pairs,
// on-demand qubits and over-waiting, without utilization charges.
struct DecisionSummary {
  double ondemand_cost = 0.0;
  double reserved_pairs = 0.0;
  double utilized_pairs = 0.0;
  double ondemand_pairs = 0.0;
  int peak_utilized_pairs = 0;
  double reserved_qubits = 0.0;
  double utilized_qubits = 0.0;
  double ondemand_qubits = 0.0;
  double overwait = 0.0;
};

DecisionSummary summarize(const PlanSolution& plan, const Instance& instance,
                          const ScenarioSpace& space);

// One evaluated (instance, space, mode) combination.
struct ModeOutcome {
  PlanMode mode = PlanMode::kStochastic;
  std::string status = "optimal";  // optimal | infeasible | error text
  bool ok = false;
  // Empty for the deterministic mode, which has one plan per scenario.
  std::optional<PlanSolution> plan;
  CostBreakdown cost;
  DecisionSummary summary;
  // Benders only.
  int pair_iterations = 0;
  int qubit_iterations = 0;
};

// Solves `space` on `instance` under `mode`. Expected-value plans are scored
// against the full space, deterministic totals are probability-weighted
// perfect-information optima. `forced_reserved` fixes the total of reserved
// pairs and is not available in Benders mode (std::invalid_argument). Never
// throws for infeasible inputs; the status says what happened. In Benders
// mode `report`, when given, receives the decomposition report.
ModeOutcome run_mode(const Instance& instance, const ScenarioSpace& space, PlanMode mode,
                     const BendersConfig& benders = {},
                     std::optional<int> forced_reserved = std::nullopt,
                     DecomposedReport* report = nullptr);

// Header row of sweep and plan reports.
std::string csv_header();
// One report row. `label`/`value` name the sweep point.
std::string csv_row(const std::string& label, double value, const ModeOutcome& outcome);

// Throws std::invalid_argument when the spec cannot run.
void validate(const ExperimentSpec& spec);

// Writes the schema comment, header and one row per (sweep point, mode) in
// sweep order. Returns the outcomes in the same order.
std::vector<ModeOutcome> sweep(const ExperimentSpec& spec, std::ostream& out);

struct ComparisonRow {
  PlanMode mode;
  ModeOutcome outcome;
};

struct Comparison {
  std::vector<ComparisonRow> rows;  // sp, ev, det
  bool ordering_holds = false;      // det <= sp <= ev within 1e-5
  double savings_vs_ev = 0.0;       // (ev - sp) / ev, 0 when ev is 0
};

Comparison compare_models(const Instance& instance, const ScenarioSpace& space);
void write_comparison(const Comparison& comparison, std::ostream& out);

}  // namespace qcc
