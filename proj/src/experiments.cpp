#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "line_parser.hpp"
#include "qcc/experiments.hpp"

namespace qcc {

namespace {

constexpr struct {
  SweepVariable variable;
  const char* name;
} kVariables[] = {
    {SweepVariable::kReservedPairs, "reserved-pairs"},
    {SweepVariable::kFidelityDemand, "fidelity-demand"},
    {SweepVariable::kReservationPrice, "reservation-price"},
    {SweepVariable::kPenaltyPrice, "penalty-price"},
    {SweepVariable::kWaitingTime, "waiting-time"},
    {SweepVariable::kRequestCount, "request-count"},
};

constexpr struct {
  PlanMode mode;
  const char* name;
} kModes[] = {
    {PlanMode::kStochastic, "sp"},
    {PlanMode::kExpectedValue, "ev"},
    {PlanMode::kDeterministic, "det"},
    {PlanMode::kBenders, "benders"},
};

double parse_double(const std::string& text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [p, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || p != end) throw std::invalid_argument("not a number: '" + text + "'");
  return v;
}

// Report numbers are printed to 1e-9 so float noise such as
// 1210.1999999999998 stays out of the CSV.
std::string report_number(double v) {
  const double r = std::round(v * 1e9) / 1e9;
  return detail::format_number(r == 0.0 ? 0.0 : r);
}

ModeOutcome failed(PlanMode mode, std::string status) {
  ModeOutcome out;
  out.mode = mode;
  out.status = std::move(status);
  return out;
}

ModeOutcome from_plan(PlanMode mode, PlanSolution plan, const Instance& instance,
                      const ScenarioSpace& space) {
  ModeOutcome out;
  out.mode = mode;
  out.ok = true;
  out.cost = plan.cost;
  out.summary = summarize(plan, instance, space);
  out.plan = std::move(plan);
  return out;
}

ModelOptions direct_options(ModelMode mode, std::optional<int> forced_reserved) {
  ModelOptions options;
  options.mode = mode;
  options.total_reserved_pairs = forced_reserved;
  return options;
}

ModeOutcome run_deterministic(const Instance& instance, const ScenarioSpace& space,
                              std::optional<int> forced_reserved) {
  ModeOutcome out;
  out.mode = PlanMode::kDeterministic;
  out.ok = true;
  out.cost.per_scenario.assign(space.size(), 0.0);
  for (int k = 0; k < space.size(); ++k) {
    auto options = direct_options(ModelMode::kPerfectInformation, forced_reserved);
    options.scenario = k;
    const auto result = solve_direct(instance, space, options);
    if (result.status != lp::SolveStatus::kOptimal) {
      return failed(out.mode, std::string(lp::to_string(result.status)));
    }
    const double p = space[k].probability;
    const auto& c = result.plan.cost;
    out.cost.first_stage += p * c.first_stage;
    out.cost.second_stage += p * c.second_stage;
    out.cost.per_scenario[k] = c.second_stage;
    const auto s = summarize(result.plan, instance, single_scenario_space(space[k]));
    auto& m = out.summary;
    m.ondemand_cost += p * s.ondemand_cost;
    m.reserved_pairs += p * s.reserved_pairs;
    m.utilized_pairs += p * s.utilized_pairs;
    m.ondemand_pairs += p * s.ondemand_pairs;
    m.peak_utilized_pairs = std::max(m.peak_utilized_pairs, s.peak_utilized_pairs);
    m.reserved_qubits += p * s.reserved_qubits;
    m.utilized_qubits += p * s.utilized_qubits;
    m.ondemand_qubits += p * s.ondemand_qubits;
    m.overwait += p * s.overwait;
  }
  out.cost.total = out.cost.first_stage + out.cost.second_stage;
  return out;
}

// Per-point instance and space of a sweep.
struct SweepPoint {
  Instance instance;
  ScenarioSpace space;
  std::optional<int> forced_reserved;
};

Instance base_instance(const ExperimentSpec& spec, int requests) {
  if (spec.instance) return *spec.instance;
  if (spec.preset == "nsfnet") return run_preset_defaults(requests);
  if (spec.preset == "chain") return saturation_chain();
  throw std::invalid_argument("unknown preset '" + spec.preset + "'");
}

ScenarioSpace base_space(const ExperimentSpec& spec, const Instance& instance) {
  if (spec.scenarios) return *spec.scenarios;
  return preset_scenarios(instance, spec.num_scenarios, spec.seed);
}

// Replaces one demand dimension with the single value `v` everywhere.
ScenarioSpace with_demand(const ScenarioSpace& space, SweepVariable variable, double v) {
  auto values = space.values;
  for (auto& per_request : values) {
    for (auto& d : per_request) {
      if (variable == SweepVariable::kFidelityDemand) {
        d.fidelity = {v};
        d.fidelity_weights.clear();
      } else {
        d.wait = {v};
        d.wait_weights.clear();
      }
    }
  }
  return build_scenario_space(values);
}

int as_count(double v, const char* what) {
  if (v < 0 || std::abs(v - std::round(v)) > 1e-9) {
    throw std::invalid_argument(std::string(what) + " must be a non-negative integer");
  }
  return static_cast<int>(std::lround(v));
}

void apply(SweepPoint& point, SweepVariable variable, double v) {
  switch (variable) {
    case SweepVariable::kReservedPairs:
      point.forced_reserved = as_count(v, "reserved pairs");
      break;
    case SweepVariable::kFidelityDemand:
    case SweepVariable::kWaitingTime:
      point.space = with_demand(point.space, variable, v);
      break;
    case SweepVariable::kReservationPrice: {
      const auto prices = point.instance.costs.pair_costs();
      for (auto [key, c] : prices) {
        c.reserve = v;
        point.instance.costs.set_pair_cost(key.first, key.second, c);
      }
      break;
    }
    case SweepVariable::kPenaltyPrice: {
      const auto prices = point.instance.costs.qubit_costs();
      for (auto [key, c] : prices) {
        c.overwait_penalty = v;
        point.instance.costs.set_qubit_cost(key.first, key.second, c);
      }
      break;
    }
    case SweepVariable::kRequestCount:
      break;  // chosen when the instance is built
  }
}

// Pinned settings first, then the swept value.
SweepPoint make_point(const ExperimentSpec& spec, double v) {
  int requests = spec.requests;
  for (const auto& [variable, value] : spec.fixed) {
    if (variable == SweepVariable::kRequestCount) requests = as_count(value, "request count");
  }
  if (spec.variable == SweepVariable::kRequestCount) requests = as_count(v, "request count");
  SweepPoint point{base_instance(spec, requests), {}, std::nullopt};
  point.space = base_space(spec, point.instance);
  for (const auto& [variable, value] : spec.fixed) apply(point, variable, value);
  apply(point, spec.variable, v);
  point.instance.validate();
  return point;
}

}  // namespace

std::optional<SweepVariable> parse_sweep_variable(const std::string& name) {
  for (const auto& v : kVariables) {
    if (name == v.name) return v.variable;
  }
  return std::nullopt;
}

const char* to_string(SweepVariable variable) {
  for (const auto& v : kVariables) {
    if (v.variable == variable) return v.name;
  }
  return "?";
}

std::optional<PlanMode> parse_plan_mode(const std::string& name) {
  for (const auto& m : kModes) {
    if (name == m.name) return m.mode;
  }
  return std::nullopt;
}

const char* to_string(PlanMode mode) {
  for (const auto& m : kModes) {
    if (m.mode == mode) return m.name;
  }
  return "?";
}

std::vector<double> SweepRange::values() const {
  if (!std::isfinite(start) || !std::isfinite(stop) || !std::isfinite(step)) {
    throw std::invalid_argument("range bounds must be finite");
  }
  if (step <= 0) throw std::invalid_argument("range step must be positive");
  if (stop < start) throw std::invalid_argument("range is empty");
  const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9));
  if (n > 100000) throw std::invalid_argument("range has too many points");
  std::vector<double> out;
  for (long i = 0; i <= n; ++i) {
    // Rounded so 0.55 + 3 * 0.05 prints as 0.7.
    out.push_back(std::round((start + i * step) * 1e9) / 1e9);
  }
  return out;
}

SweepRange parse_range(const std::string& text) {
  const auto parts = detail::split_list(text, ':');
  if (parts.empty() || parts.size() > 3) {
    throw std::invalid_argument("range must be A, A:B or A:B:STEP");
  }
  SweepRange r;
  r.start = parse_double(parts[0]);
  r.stop = parts.size() > 1 ? parse_double(parts[1]) : r.start;
  if (parts.size() > 2) r.step = parse_double(parts[2]);
  r.values();
  return r;
}

DecisionSummary summarize(const PlanSolution& plan, const Instance& instance,
                          const ScenarioSpace& space) {
  DecisionSummary s;
  const auto slots = instance.qubit_slots();
  for (const auto& row : plan.pairs_reserved) {
    for (int y : row) s.reserved_pairs += y;
  }
  for (int q : plan.qubits_reserved) s.reserved_qubits += q;
  for (int k = 0; k < space.size(); ++k) {
    const double p = space[k].probability;
    for (size_t r = 0; r < plan.pairs_utilized[k].size(); ++r) {
      for (size_t l = 0; l < plan.pairs_utilized[k][r].size(); ++l) {
        s.utilized_pairs += p * plan.pairs_utilized[k][r][l];
        s.ondemand_pairs += p * plan.pairs_ondemand[k][r][l];
        if (plan.pairs_ondemand[k][r][l] > 0) {
          s.ondemand_cost += p * instance.pair_cost(l, r).ondemand * plan.pairs_ondemand[k][r][l];
        }
        s.peak_utilized_pairs = std::max(s.peak_utilized_pairs, plan.pairs_utilized[k][r][l]);
      }
    }
    for (size_t q = 0; q < plan.qubits_utilized[k].size(); ++q) {
      s.utilized_qubits += p * plan.qubits_utilized[k][q];
      s.ondemand_qubits += p * plan.qubits_ondemand[k][q];
      s.overwait += p * plan.overwait[k][q];
      const auto& price = instance.qubit_cost(slots[q]);
      s.ondemand_cost += p * (price.ondemand * plan.qubits_ondemand[k][q] +
                              price.overwait_penalty * plan.overwait[k][q]);
    }
  }
  return s;
}

ModeOutcome run_mode(const Instance& instance, const ScenarioSpace& space, PlanMode mode,
                     const BendersConfig& benders, std::optional<int> forced_reserved,
                     DecomposedReport* report) {
  if (mode == PlanMode::kBenders && forced_reserved) {
    throw std::invalid_argument("forced reservations need a direct mode");
  }
  try {
    switch (mode) {
      case PlanMode::kStochastic: {
        auto result = solve_direct(instance, space,
                                   direct_options(ModelMode::kStochastic, forced_reserved));
        if (result.status != lp::SolveStatus::kOptimal) {
          return failed(mode, std::string(lp::to_string(result.status)));
        }
        return from_plan(mode, std::move(result.plan), instance, space);
      }
      case PlanMode::kExpectedValue: {
        const auto result = solve_direct(
            instance, space, direct_options(ModelMode::kExpectedValue, forced_reserved));
        if (result.status != lp::SolveStatus::kOptimal) {
          return failed(mode, std::string(lp::to_string(result.status)));
        }
        auto eval = evaluate_first_stage_against(result.plan, instance, space);
        if (!eval.feasible) return failed(mode, "infeasible");
        return from_plan(mode, std::move(eval.plan), instance, space);
      }
      case PlanMode::kDeterministic:
        return run_deterministic(instance, space, forced_reserved);
      case PlanMode::kBenders: {
        DecomposedReport local;
        DecomposedReport& rep = report ? *report : local;
        auto plan = run_decomposed(instance, space, benders, &rep);
        auto out = from_plan(mode, std::move(plan), instance, space);
        out.pair_iterations = rep.pairs.iteration;
        out.qubit_iterations = rep.qubits.iteration;
        if (!rep.pairs.converged || !rep.qubits.converged) out.status = "not_converged";
        return out;
      }
    }
  } catch (const InfeasibleModelError&) {
    return failed(mode, "infeasible");
  } catch (const RouteSelectionError&) {
    return failed(mode, "infeasible");
  }
  return failed(mode, "unknown mode");
}

std::string csv_header() {
  return "variable,value,mode,status,first_stage,second_stage,total,ondemand_cost,reserved_pairs,"
         "utilized_pairs,ondemand_pairs,peak_utilized_pairs,reserved_qubits,utilized_qubits,"
         "ondemand_qubits,overwait,pair_iterations,qubit_iterations";
}

std::string csv_row(const std::string& label, double value, const ModeOutcome& outcome) {
  using detail::format_number;
  std::ostringstream row;
  row << label << ',' << format_number(value) << ',' << to_string(outcome.mode) << ','
      << outcome.status;
  if (!outcome.ok) {
    // Numeric columns stay empty for failed points.
    for (int i = 0; i < 14; ++i) row << ',';
    return row.str();
  }
  const auto& c = outcome.cost;
  const auto& s = outcome.summary;
  for (double v : {c.first_stage, c.second_stage, c.first_stage + c.second_stage,
                   s.ondemand_cost, s.reserved_pairs, s.utilized_pairs, s.ondemand_pairs}) {
    row << ',' << report_number(v);
  }
  row << ',' << s.peak_utilized_pairs;
  for (double v : {s.reserved_qubits, s.utilized_qubits, s.ondemand_qubits, s.overwait}) {
    row << ',' << report_number(v);
  }
  row << ',' << outcome.pair_iterations << ',' << outcome.qubit_iterations;
  return row.str();
}

void validate(const ExperimentSpec& spec) {
  if (spec.modes.empty()) throw std::invalid_argument("no modes selected");
  spec.range.values();
  spec.benders.validate();
  if (!spec.instance && spec.preset != "nsfnet" && spec.preset != "chain") {
    throw std::invalid_argument("unknown preset '" + spec.preset + "'");
  }
  std::vector<SweepVariable> used{spec.variable};
  for (const auto& [variable, value] : spec.fixed) {
    if (std::find(used.begin(), used.end(), variable) != used.end()) {
      throw std::invalid_argument(std::string(to_string(variable)) + " is set twice");
    }
    if (!std::isfinite(value)) throw std::invalid_argument("fixed values must be finite");
    used.push_back(variable);
  }
  for (auto variable : used) {
    if (variable == SweepVariable::kRequestCount &&
        (spec.instance || spec.scenarios || spec.preset != "nsfnet")) {
      throw std::invalid_argument("request-count needs the nsfnet preset");
    }
    if (variable == SweepVariable::kReservedPairs &&
        std::find(spec.modes.begin(), spec.modes.end(), PlanMode::kBenders) != spec.modes.end()) {
      throw std::invalid_argument("reserved-pairs needs a direct mode");
    }
  }
  if (spec.num_scenarios < 1) throw std::invalid_argument("need at least one scenario");
}

std::vector<ModeOutcome> sweep(const ExperimentSpec& spec, std::ostream& out) {
  validate(spec);
  out << "# " << kCsvSchema << '\n';
  for (const auto& [variable, value] : spec.fixed) {
    out << "# fixed " << to_string(variable) << '=' << detail::format_number(value) << '\n';
  }
  out << csv_header() << '\n';
  std::vector<ModeOutcome> outcomes;
  for (double v : spec.range.values()) {
    const auto point = make_point(spec, v);
    for (PlanMode mode : spec.modes) {
      outcomes.push_back(
          run_mode(point.instance, point.space, mode, spec.benders, point.forced_reserved));
      out << csv_row(to_string(spec.variable), v, outcomes.back()) << '\n';
    }
  }
  return outcomes;
}

Comparison compare_models(const Instance& instance, const ScenarioSpace& space) {
  Comparison cmp;
  for (PlanMode mode : {PlanMode::kStochastic, PlanMode::kExpectedValue, PlanMode::kDeterministic}) {
    cmp.rows.push_back({mode, run_mode(instance, space, mode)});
  }
  const auto& sp = cmp.rows[0].outcome;
  const auto& ev = cmp.rows[1].outcome;
  const auto& det = cmp.rows[2].outcome;
  if (sp.ok && ev.ok && det.ok) {
    cmp.ordering_holds = det.cost.total <= sp.cost.total + 1e-5 &&
                         sp.cost.total <= ev.cost.total + 1e-5;
    if (ev.cost.total > 0) cmp.savings_vs_ev = (ev.cost.total - sp.cost.total) / ev.cost.total;
  }
  return cmp;
}

void write_comparison(const Comparison& comparison, std::ostream& out) {
  out << "# " << kCsvSchema << '\n' << csv_header() << '\n';
  for (const auto& row : comparison.rows) {
    out << csv_row("compare", 0, row.outcome) << '\n';
  }
  out << "# ordering det<=sp<=ev " << (comparison.ordering_holds ? "holds" : "violated")
      << ", savings_vs_ev " << detail::format_number(comparison.savings_vs_ev) << '\n';
}

}  // namespace qcc
