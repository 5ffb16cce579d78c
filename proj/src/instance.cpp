#include "qcc/instance.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "line_parser.hpp"

namespace qcc {

using detail::format_number;
using detail::Line;

// ---------------------------------------------------------------------------
// NetworkTopology

int NetworkTopology::add_node(QuantumNode node) {
  if (node.id.empty()) throw InputError("empty node id");
  if (node_index_.count(node.id)) {
    throw InputError("duplicate node id '" + node.id + "'");
  }
  if (!(node.energy_cost >= 0.0) || !(node.repeater_setup_cost >= 0.0)) {
    throw InputError("negative cost on node '" + node.id + "'");
  }
  const int n = num_nodes();
  node_index_[node.id] = n;
  nodes_.push_back(std::move(node));
  outgoing_.emplace_back();
  incoming_.emplace_back();
  return n;
}

int NetworkTopology::push_link(QuantumLink link) {
  if (link.from < 0 || link.from >= num_nodes() || link.to < 0 ||
      link.to >= num_nodes()) {
    throw InputError("unknown node in link");
  }
  if (link.from == link.to) {
    throw InputError("self-loop on node '" + nodes_[link.from].id + "'");
  }
  if (find_link(link.from, link.to) >= 0) {
    throw InputError("duplicate link " + nodes_[link.from].id + "->" +
                     nodes_[link.to].id);
  }
  if (!(link.base_fidelity > 0.0 && link.base_fidelity <= 1.0)) {
    throw InputError("fidelity out of (0,1]: " + format_number(link.base_fidelity));
  }
  if (!(link.fidelity_threshold > 0.0 && link.fidelity_threshold <= 1.0)) {
    throw InputError("fidelity threshold out of (0,1]: " +
                     format_number(link.fidelity_threshold));
  }
  if (link.reserve_capacity < 0 || link.ondemand_capacity < 0) {
    throw InputError("negative link capacity");
  }
  const int l = num_links();
  outgoing_[link.from].push_back(l);
  incoming_[link.to].push_back(l);
  links_.push_back(link);
  return l;
}

int NetworkTopology::add_fiber(int from, int to, double base_fidelity,
                               double fidelity_threshold, int reserve_capacity,
                               int ondemand_capacity) {
  QuantumLink link{from,          to, base_fidelity, fidelity_threshold,
                   reserve_capacity, ondemand_capacity, num_fibers_};
  if (find_link(to, from) >= 0) {
    throw InputError("duplicate link " + nodes_.at(to).id + "->" +
                     nodes_.at(from).id);
  }
  const int forward = push_link(link);
  std::swap(link.from, link.to);
  push_link(link);
  ++num_fibers_;
  return forward;
}

int NetworkTopology::add_arc(int from, int to, double base_fidelity,
                             double fidelity_threshold, int reserve_capacity,
                             int ondemand_capacity) {
  const int l = push_link({from, to, base_fidelity, fidelity_threshold,
                           reserve_capacity, ondemand_capacity, num_fibers_});
  ++num_fibers_;
  return l;
}

int NetworkTopology::find_node(const std::string& id) const {
  auto it = node_index_.find(id);
  return it == node_index_.end() ? -1 : it->second;
}

int NetworkTopology::find_link(int from, int to) const {
  if (from < 0 || from >= num_nodes()) return -1;
  for (int l : outgoing_[from]) {
    if (links_[l].to == to) return l;
  }
  return -1;
}

std::vector<int> NetworkTopology::fiber_links(int fiber) const {
  std::vector<int> out;
  for (int l = 0; l < num_links(); ++l) {
    if (links_[l].fiber == fiber) out.push_back(l);
  }
  return out;
}

void NetworkTopology::validate() const {
  for (int l = 0; l < num_links(); ++l) {
    const auto& link = links_[l];
    if (link.from < 0 || link.from >= num_nodes() || link.to < 0 ||
        link.to >= num_nodes()) {
      throw InputError("link endpoint outside the node set");
    }
    if (!(link.base_fidelity > 0.0 && link.base_fidelity <= 1.0) ||
        !(link.fidelity_threshold > 0.0 && link.fidelity_threshold <= 1.0)) {
      throw InputError("fidelity out of (0,1]");
    }
  }
  // Fiber partners must agree on everything but direction.
  for (int f = 0; f < num_fibers_; ++f) {
    auto ls = fiber_links(f);
    if (ls.empty() || ls.size() > 2) throw InputError("malformed fiber table");
    if (ls.size() == 2) {
      const auto& a = links_[ls[0]];
      const auto& b = links_[ls[1]];
      if (a.from != b.to || a.to != b.from ||
          a.base_fidelity != b.base_fidelity ||
          a.fidelity_threshold != b.fidelity_threshold ||
          a.reserve_capacity != b.reserve_capacity ||
          a.ondemand_capacity != b.ondemand_capacity) {
        throw InputError("fiber directions disagree");
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Machine, CostModel

double Machine::exe_time(const std::string& request,
                         const std::string& circuit) const {
  auto it = execution_time.find({request, circuit});
  return it == execution_time.end() ? 0.0 : it->second;
}

namespace {

template <typename T>
const T* lookup(const std::map<std::pair<std::string, std::string>, T>& table,
                const std::string& a, const std::string& b) {
  for (const auto& key : {std::make_pair(a, b), std::make_pair(a, std::string("*")),
                          std::make_pair(std::string("*"), b),
                          std::make_pair(std::string("*"), std::string("*"))}) {
    auto it = table.find(key);
    if (it != table.end()) return &it->second;
  }
  return nullptr;
}

bool non_negative(const PairCost& c) {
  return c.reserve >= 0 && c.utilize >= 0 && c.ondemand >= 0;
}

bool non_negative(const QubitCost& c) {
  return c.reserve >= 0 && c.utilize >= 0 && c.ondemand >= 0 &&
         c.overwait_penalty >= 0;
}

}  // namespace

void CostModel::set_pair_cost(const std::string& node,
                              const std::string& request, PairCost cost) {
  if (!non_negative(cost)) throw InputError("negative pair cost");
  pair_[{node, request}] = cost;
}

void CostModel::set_qubit_cost(const std::string& circuit,
                               const std::string& provider, QubitCost cost) {
  if (!non_negative(cost)) throw InputError("negative qubit cost");
  qubit_[{circuit, provider}] = cost;
}

const PairCost& CostModel::pair_cost(const std::string& node,
                                     const std::string& request) const {
  if (const auto* c = lookup(pair_, node, request)) return *c;
  throw InputError("no pair cost for node '" + node + "' request '" + request + "'");
}

const QubitCost& CostModel::qubit_cost(const std::string& circuit,
                                       const std::string& provider) const {
  if (const auto* c = lookup(qubit_, circuit, provider)) return *c;
  throw InputError("no qubit cost for circuit '" + circuit + "' provider '" +
                   provider + "'");
}

void CostModel::scale(double factor) {
  for (auto& [key, c] : pair_) {
    c.reserve *= factor;
    c.utilize *= factor;
    c.ondemand *= factor;
  }
  for (auto& [key, c] : qubit_) {
    c.reserve *= factor;
    c.utilize *= factor;
    c.ondemand *= factor;
    c.overwait_penalty *= factor;
  }
}

// ---------------------------------------------------------------------------
// Instance

std::vector<QubitSlot> Instance::qubit_slots() const {
  std::vector<QubitSlot> slots;
  for (int r = 0; r < static_cast<int>(requests.size()); ++r) {
    for (int c = 0; c < static_cast<int>(requests[r].circuits.size()); ++c) {
      for (int p = 0; p < static_cast<int>(providers.size()); ++p) {
        for (int m = 0; m < static_cast<int>(providers[p].machines.size()); ++m) {
          slots.push_back({r, c, p, m});
        }
      }
    }
  }
  return slots;
}

int Instance::find_request(const std::string& id) const {
  for (int r = 0; r < static_cast<int>(requests.size()); ++r) {
    if (requests[r].id == id) return r;
  }
  return -1;
}

const PairCost& Instance::pair_cost(int link, int request) const {
  const auto& head = topology.node(topology.link(link).to);
  return costs.pair_cost(head.id, requests.at(request).id);
}

double Instance::node_cost(int link) const {
  const auto& head = topology.node(topology.link(link).to);
  return head.energy_cost + head.repeater_setup_cost;
}

const QubitCost& Instance::qubit_cost(const QubitSlot& slot) const {
  return costs.qubit_cost(requests.at(slot.request).circuits.at(slot.circuit),
                          providers.at(slot.provider).id);
}

double Instance::exe_time(const QubitSlot& slot) const {
  const auto& req = requests.at(slot.request);
  return providers.at(slot.provider)
      .machines.at(slot.machine)
      .exe_time(req.id, req.circuits.at(slot.circuit));
}

int Instance::qubit_capacity(const QubitSlot& slot) const {
  return providers.at(slot.provider).machines.at(slot.machine).qubit_capacity;
}

void Instance::validate() const {
  topology.validate();
  std::set<std::string> seen;
  for (const auto& r : requests) {
    if (!seen.insert(r.id).second) throw InputError("duplicate request id '" + r.id + "'");
    if (r.source < 0 || r.source >= topology.num_nodes() || r.destination < 0 ||
        r.destination >= topology.num_nodes()) {
      throw InputError("unknown node in request '" + r.id + "'");
    }
    if (r.source == r.destination) {
      throw InputError("request '" + r.id + "' has source equal to destination");
    }
    std::set<std::string> circuits(r.circuits.begin(), r.circuits.end());
    if (circuits.size() != r.circuits.size()) {
      throw InputError("duplicate circuit in request '" + r.id + "'");
    }
  }
  seen.clear();
  for (const auto& p : providers) {
    if (!seen.insert(p.id).second) throw InputError("duplicate provider id '" + p.id + "'");
    if (p.machines.empty()) throw InputError("provider '" + p.id + "' has no machines");
    std::set<std::string> machines;
    for (const auto& m : p.machines) {
      if (!machines.insert(m.id).second) {
        throw InputError("duplicate machine '" + m.id + "' in provider '" + p.id + "'");
      }
      if (m.qubit_capacity < 1) throw InputError("machine '" + m.id + "' has no qubits");
      for (const auto& [key, t] : m.execution_time) {
        if (!(t >= 0.0)) throw InputError("negative execution time");
      }
    }
  }
  bool has_circuit = false;
  for (const auto& r : requests) has_circuit = has_circuit || !r.circuits.empty();
  if (has_circuit && providers.empty()) throw InputError("circuits but no providers");
  // Resolve every price the model will read.
  for (int r = 0; r < static_cast<int>(requests.size()); ++r) {
    for (int l = 0; l < topology.num_links(); ++l) pair_cost(l, r);
  }
  for (const auto& slot : qubit_slots()) qubit_cost(slot);
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

int node_ref(const Line& line, const NetworkTopology& topology,
             const std::string& id) {
  const int n = topology.find_node(id);
  if (n < 0) line.fail("unknown node '" + id + "'");
  return n;
}

template <typename F>
void at_line(const Line& line, F&& body) {
  try {
    body();
  } catch (const InputError& e) {
    const std::string what = e.what();
    if (what.rfind("line ", 0) == 0) throw;
    line.fail(what);
  }
}

}  // namespace

NetworkTopology parse_topology(const std::string& text) {
  NetworkTopology topology;
  for (const auto& line : detail::split_lines(text)) {
    at_line(line, [&] {
      const auto& kind = line.word(0, "directive");
      if (kind == "node") {
        if (line.words.size() != 2) line.fail("expected: node <id> ecc=<float> scs=<float>");
        line.only({"ecc", "scs"});
        topology.add_node({line.words[1], line.number_opt("ecc"), line.number_opt("scs")});
      } else if (kind == "link" || kind == "arc") {
        if (line.words.size() != 3) line.fail("expected: " + kind + " <i> <j> f= fts= rcap= ocap=");
        line.only({"f", "fts", "rcap", "ocap"});
        const int i = node_ref(line, topology, line.words[1]);
        const int j = node_ref(line, topology, line.words[2]);
        const double f = line.number_opt("f");
        const double fts = line.number_opt("fts");
        const int rcap = line.int_opt("rcap");
        const int ocap = line.int_opt("ocap");
        if (kind == "link") {
          topology.add_fiber(i, j, f, fts, rcap, ocap);
        } else {
          topology.add_arc(i, j, f, fts, rcap, ocap);
        }
      } else {
        line.fail("unknown directive '" + kind + "'");
      }
    });
  }
  return topology;
}

CostModel parse_costs(const std::string& text) {
  CostModel costs;
  for (const auto& line : detail::split_lines(text)) {
    at_line(line, [&] {
      const auto& kind = line.word(0, "directive");
      if (line.words.size() != 3) line.fail("expected: " + kind + " <a> <b> options");
      if (kind == "paircost") {
        line.only({"r", "u", "o"});
        costs.set_pair_cost(line.words[1], line.words[2],
                            {line.number_opt("r"), line.number_opt("u"),
                             line.number_opt("o")});
      } else if (kind == "qubitcost") {
        line.only({"r", "u", "o", "pwt"});
        costs.set_qubit_cost(line.words[1], line.words[2],
                             {line.number_opt("r"), line.number_opt("u"),
                              line.number_opt("o"), line.number_opt("pwt")});
      } else {
        line.fail("unknown directive '" + kind + "'");
      }
    });
  }
  return costs;
}

void parse_requests(const std::string& text, const NetworkTopology& topology,
                    std::vector<Provider>& providers,
                    std::vector<Request>& requests) {
  std::vector<Line> exe_lines;
  for (const auto& line : detail::split_lines(text)) {
    const auto& kind = line.word(0, "directive");
    if (kind == "request") {
      if (line.words.size() != 2) line.fail("expected: request <id> src= dst= circuits=");
      line.only({"src", "dst", "circuits"});
      Request r;
      r.id = line.words[1];
      for (const auto& q : requests) {
        if (q.id == r.id) line.fail("duplicate request id '" + r.id + "'");
      }
      r.source = node_ref(line, topology, line.opt("src"));
      r.destination = node_ref(line, topology, line.opt("dst"));
      if (r.source == r.destination) line.fail("source equals destination");
      if (!line.opt("circuits").empty()) r.circuits = detail::split_list(line.opt("circuits"));
      for (const auto& c : r.circuits) {
        if (c.empty()) line.fail("empty circuit id");
      }
      requests.push_back(std::move(r));
    } else if (kind == "provider") {
      if (line.words.size() != 2) line.fail("expected: provider <id> machines=<m:cap,...>");
      line.only({"machines"});
      Provider p;
      p.id = line.words[1];
      for (const auto& q : providers) {
        if (q.id == p.id) line.fail("duplicate provider id '" + p.id + "'");
      }
      for (const auto& spec : detail::split_list(line.opt("machines"))) {
        const auto colon = spec.find(':');
        if (colon == std::string::npos || colon == 0) line.fail("machine needs <id>:<capacity>");
        Machine m;
        m.id = spec.substr(0, colon);
        m.qubit_capacity = line.to_int(spec.substr(colon + 1), "machines");
        if (m.qubit_capacity < 1) line.fail("machine capacity must be >= 1");
        for (const auto& other : p.machines) {
          if (other.id == m.id) line.fail("duplicate machine '" + m.id + "'");
        }
        p.machines.push_back(std::move(m));
      }
      if (p.machines.empty()) line.fail("provider without machines");
      providers.push_back(std::move(p));
    } else if (kind == "exe") {
      exe_lines.push_back(line);
    } else {
      line.fail("unknown directive '" + kind + "'");
    }
  }
  // exe lines may precede the provider or request they refer to.
  for (const auto& line : exe_lines) {
    if (line.words.size() != 5) line.fail("expected: exe <circuit> <provider> <machine> <request> t=");
    line.only({"t"});
    const auto& circuit = line.words[1];
    Provider* provider = nullptr;
    for (auto& p : providers) {
      if (p.id == line.words[2]) provider = &p;
    }
    if (!provider) line.fail("unknown provider '" + line.words[2] + "'");
    Machine* machine = nullptr;
    for (auto& m : provider->machines) {
      if (m.id == line.words[3]) machine = &m;
    }
    if (!machine) line.fail("unknown machine '" + line.words[3] + "'");
    const Request* request = nullptr;
    for (const auto& r : requests) {
      if (r.id == line.words[4]) request = &r;
    }
    if (!request) line.fail("unknown request '" + line.words[4] + "'");
    bool has = false;
    for (const auto& c : request->circuits) has = has || c == circuit;
    if (!has) line.fail("request '" + request->id + "' has no circuit '" + circuit + "'");
    const double t = line.number_opt("t");
    if (!(t >= 0.0)) line.fail("negative execution time");
    if (!machine->execution_time.emplace(std::make_pair(request->id, circuit), t).second) {
      line.fail("duplicate exe entry");
    }
  }
}

Instance parse_instance(const std::string& topology_text,
                        const std::string& costs_text,
                        const std::string& requests_text) {
  Instance instance;
  try {
    instance.topology = parse_topology(topology_text);
  } catch (const InputError& e) {
    throw InputError(std::string("topology: ") + e.what());
  }
  try {
    instance.costs = parse_costs(costs_text);
  } catch (const InputError& e) {
    throw InputError(std::string("costs: ") + e.what());
  }
  try {
    parse_requests(requests_text, instance.topology, instance.providers,
                   instance.requests);
  } catch (const InputError& e) {
    throw InputError(std::string("requests: ") + e.what());
  }
  instance.validate();
  return instance;
}

// ---------------------------------------------------------------------------
// Serialization

std::string serialize_topology(const NetworkTopology& topology) {
  std::ostringstream out;
  for (const auto& n : topology.nodes()) {
    out << "node " << n.id << " ecc=" << format_number(n.energy_cost)
        << " scs=" << format_number(n.repeater_setup_cost) << '\n';
  }
  std::vector<bool> done(topology.num_fibers(), false);
  for (const auto& l : topology.links()) {
    if (done[l.fiber]) continue;
    done[l.fiber] = true;
    const bool both = topology.fiber_links(l.fiber).size() == 2;
    out << (both ? "link " : "arc ") << topology.node(l.from).id << ' '
        << topology.node(l.to).id << " f=" << format_number(l.base_fidelity)
        << " fts=" << format_number(l.fidelity_threshold)
        << " rcap=" << l.reserve_capacity << " ocap=" << l.ondemand_capacity
        << '\n';
  }
  return out.str();
}

std::string serialize_costs(const CostModel& costs) {
  std::ostringstream out;
  for (const auto& [key, c] : costs.pair_costs()) {
    out << "paircost " << key.first << ' ' << key.second
        << " r=" << format_number(c.reserve) << " u=" << format_number(c.utilize)
        << " o=" << format_number(c.ondemand) << '\n';
  }
  for (const auto& [key, c] : costs.qubit_costs()) {
    out << "qubitcost " << key.first << ' ' << key.second
        << " r=" << format_number(c.reserve) << " u=" << format_number(c.utilize)
        << " o=" << format_number(c.ondemand)
        << " pwt=" << format_number(c.overwait_penalty) << '\n';
  }
  return out.str();
}

std::string serialize_requests(const Instance& instance) {
  std::ostringstream out;
  const auto& topo = instance.topology;
  for (const auto& r : instance.requests) {
    out << "request " << r.id << " src=" << topo.node(r.source).id
        << " dst=" << topo.node(r.destination).id << " circuits=";
    for (size_t i = 0; i < r.circuits.size(); ++i) {
      out << (i ? "," : "") << r.circuits[i];
    }
    out << '\n';
  }
  for (const auto& p : instance.providers) {
    out << "provider " << p.id << " machines=";
    for (size_t i = 0; i < p.machines.size(); ++i) {
      out << (i ? "," : "") << p.machines[i].id << ':' << p.machines[i].qubit_capacity;
    }
    out << '\n';
  }
  for (const auto& p : instance.providers) {
    for (const auto& m : p.machines) {
      for (const auto& [key, t] : m.execution_time) {
        out << "exe " << key.second << ' ' << p.id << ' ' << m.id << ' '
            << key.first << " t=" << format_number(t) << '\n';
      }
    }
  }
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace qcc
