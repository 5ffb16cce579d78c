#include "qcc/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "line_parser.hpp"

namespace qcc {

double Scenario::request_fidelity(int request) const {
  const auto& f = fidelity.at(request);
  return f.empty() ? 0.0 : *std::max_element(f.begin(), f.end());
}

namespace {

std::vector<double> normalized(const std::vector<double>& weights, size_t n,
                               const char* what) {
  if (weights.empty()) return std::vector<double>(n, 1.0 / static_cast<double>(n));
  if (weights.size() != n) {
    throw InputError(std::string(what) + " weights do not match the value count");
  }
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw InputError(std::string("negative ") + what + " weight");
    sum += w;
  }
  if (!(sum > 0.0)) throw InputError(std::string(what) + " weights are all zero");
  std::vector<double> out(weights);
  for (double& w : out) w /= sum;
  return out;
}

// One enumerated component: (request, circuit) plus a flat index into F x Q x E.
struct Axis {
  int request;
  int circuit;
  std::vector<double> fidelity, fidelity_p;
  std::vector<int> qubits;
  std::vector<double> qubits_p;
  std::vector<double> wait, wait_p;

  size_t size() const { return fidelity.size() * qubits.size() * wait.size(); }
};

}  // namespace

ScenarioSpace build_scenario_space(
    const std::vector<std::vector<DemandValues>>& values) {
  std::vector<Axis> axes;
  for (int r = 0; r < static_cast<int>(values.size()); ++r) {
    for (int c = 0; c < static_cast<int>(values[r].size()); ++c) {
      const auto& v = values[r][c];
      if (v.fidelity.empty() || v.qubits.empty() || v.wait.empty()) {
        throw InputError("empty value set");
      }
      for (double f : v.fidelity) {
        if (!(f > 0.0 && f <= 1.0)) throw InputError("fidelity demand out of (0,1]");
      }
      for (int q : v.qubits) {
        if (q < 0) throw InputError("negative qubit demand");
      }
      for (double w : v.wait) {
        if (!(w >= 0.0)) throw InputError("negative waiting time");
      }
      axes.push_back({r, c, v.fidelity, normalized(v.fidelity_weights, v.fidelity.size(), "fidelity"),
                      v.qubits, normalized(v.qubit_weights, v.qubits.size(), "qubit"),
                      v.wait, normalized(v.wait_weights, v.wait.size(), "wait")});
    }
  }

  ScenarioSpace space;
  space.values = values;
  Scenario blank;
  for (const auto& per_request : values) {
    blank.fidelity.emplace_back(per_request.size(), 0.0);
    blank.qubits.emplace_back(per_request.size(), 0);
    blank.wait.emplace_back(per_request.size(), 0.0);
  }

  // Mixed-radix counter, last axis fastest.
  std::vector<size_t> digit(axes.size(), 0);
  while (true) {
    Scenario s = blank;
    s.probability = 1.0;
    for (size_t a = 0; a < axes.size(); ++a) {
      const auto& ax = axes[a];
      const size_t nq = ax.qubits.size(), nw = ax.wait.size();
      const size_t fi = digit[a] / (nq * nw);
      const size_t qi = (digit[a] / nw) % nq;
      const size_t wi = digit[a] % nw;
      s.fidelity[ax.request][ax.circuit] = ax.fidelity[fi];
      s.qubits[ax.request][ax.circuit] = ax.qubits[qi];
      s.wait[ax.request][ax.circuit] = ax.wait[wi];
      s.probability *= ax.fidelity_p[fi] * ax.qubits_p[qi] * ax.wait_p[wi];
    }
    space.scenarios.push_back(std::move(s));
    size_t a = axes.size();
    while (a > 0 && ++digit[a - 1] == axes[a - 1].size()) digit[--a] = 0;
    if (a == 0) break;
  }

  // Renormalize so the sum is 1 up to rounding of the final division.
  double total = 0.0;
  for (const auto& s : space.scenarios) total += s.probability;
  for (auto& s : space.scenarios) s.probability /= total;
  return space;
}

ScenarioSpace single_scenario_space(const Scenario& scenario) {
  ScenarioSpace space;
  Scenario s = scenario;
  s.probability = 1.0;
  for (size_t r = 0; r < s.fidelity.size(); ++r) {
    std::vector<DemandValues> per_request;
    for (size_t c = 0; c < s.fidelity[r].size(); ++c) {
      per_request.push_back({{s.fidelity[r][c]}, {s.qubits[r][c]}, {s.wait[r][c]}, {}, {}, {}});
    }
    space.values.push_back(std::move(per_request));
  }
  space.scenarios.push_back(std::move(s));
  return space;
}

Scenario expected_scenario(const ScenarioSpace& space) {
  if (space.scenarios.empty()) throw InputError("empty scenario space");
  Scenario mean = space.scenarios.front();
  mean.probability = 1.0;
  for (size_t r = 0; r < mean.fidelity.size(); ++r) {
    for (size_t c = 0; c < mean.fidelity[r].size(); ++c) {
      double f = 0.0, q = 0.0, w = 0.0;
      for (const auto& s : space.scenarios) {
        f += s.probability * s.fidelity[r][c];
        q += s.probability * s.qubits[r][c];
        w += s.probability * s.wait[r][c];
      }
      mean.fidelity[r][c] = std::min(1.0, f);
      // Guard against 12.000000000001 rounding up to 13.
      mean.qubits[r][c] = static_cast<int>(std::ceil(q - 1e-9));
      mean.wait[r][c] = w;
    }
  }
  return mean;
}

// ---------------------------------------------------------------------------
// Text format

namespace {

std::vector<double> double_list(const detail::Line& line, const std::string& key) {
  std::vector<double> out;
  for (const auto& s : detail::split_list(line.opt(key))) out.push_back(line.to_double(s, key));
  return out;
}

std::vector<double> optional_list(const detail::Line& line, const std::string& key) {
  return line.opts.count(key) ? double_list(line, key) : std::vector<double>{};
}

template <typename T>
void write_list(std::ostream& out, const std::vector<T>& v) {
  for (size_t i = 0; i < v.size(); ++i) {
    out << (i ? "," : "");
    if constexpr (std::is_same_v<T, int>) {
      out << v[i];
    } else {
      out << detail::format_number(v[i]);
    }
  }
}

}  // namespace

ScenarioSpace parse_scenarios(const std::string& text, const Instance& instance) {
  std::vector<std::vector<DemandValues>> values;
  std::vector<std::vector<bool>> seen;
  for (const auto& r : instance.requests) {
    values.emplace_back(r.circuits.size());
    seen.emplace_back(r.circuits.size(), false);
  }
  for (const auto& line : detail::split_lines(text)) {
    if (line.word(0, "directive") != "values") {
      line.fail("unknown directive '" + line.words[0] + "'");
    }
    if (line.words.size() != 3) line.fail("expected: values <request> <circuit> fidelity= qubits= wait=");
    line.only({"fidelity", "qubits", "wait", "fidelity_weights", "qubit_weights",
               "wait_weights"});
    const int r = instance.find_request(line.words[1]);
    if (r < 0) line.fail("unknown request '" + line.words[1] + "'");
    const auto& circuits = instance.requests[r].circuits;
    auto it = std::find(circuits.begin(), circuits.end(), line.words[2]);
    if (it == circuits.end()) line.fail("unknown circuit '" + line.words[2] + "'");
    const auto c = static_cast<size_t>(it - circuits.begin());
    if (seen[r][c]) line.fail("duplicate values line");
    seen[r][c] = true;
    auto& v = values[r][c];
    v.fidelity = double_list(line, "fidelity");
    for (const auto& s : detail::split_list(line.opt("qubits"))) {
      v.qubits.push_back(line.to_int(s, "qubits"));
    }
    v.wait = double_list(line, "wait");
    v.fidelity_weights = optional_list(line, "fidelity_weights");
    v.qubit_weights = optional_list(line, "qubit_weights");
    v.wait_weights = optional_list(line, "wait_weights");
  }
  for (size_t r = 0; r < seen.size(); ++r) {
    for (size_t c = 0; c < seen[r].size(); ++c) {
      if (!seen[r][c]) {
        throw InputError("no values for request '" + instance.requests[r].id +
                         "' circuit '" + instance.requests[r].circuits[c] + "'");
      }
    }
  }
  return build_scenario_space(values);
}

std::string serialize_scenarios(const ScenarioSpace& space, const Instance& instance) {
  std::ostringstream out;
  for (size_t r = 0; r < space.values.size(); ++r) {
    for (size_t c = 0; c < space.values[r].size(); ++c) {
      const auto& v = space.values[r][c];
      out << "values " << instance.requests[r].id << ' ' << instance.requests[r].circuits[c]
          << " fidelity=";
      write_list(out, v.fidelity);
      out << " qubits=";
      write_list(out, v.qubits);
      out << " wait=";
      write_list(out, v.wait);
      if (!v.fidelity_weights.empty()) {
        out << " fidelity_weights=";
        write_list(out, v.fidelity_weights);
      }
      if (!v.qubit_weights.empty()) {
        out << " qubit_weights=";
        write_list(out, v.qubit_weights);
      }
      if (!v.wait_weights.empty()) {
        out << " wait_weights=";
        write_list(out, v.wait_weights);
      }
      out << '\n';
    }
  }
  return out.str();
}

}  // namespace qcc
