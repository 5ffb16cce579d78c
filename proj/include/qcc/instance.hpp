#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qcc {

// Thrown for malformed input text or inconsistent instance data. Parse errors
// carry the 1-based line number in the message.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct QuantumNode {
  std::string id;
  double energy_cost = 0.0;          // per reserved pair entering the node
  double repeater_setup_cost = 0.0;  // per reserved pair entering the node

  bool operator==(const QuantumNode&) const = default;
};

// Directed link. Links declared together as one physical fiber share `fiber`
// and therefore share the reservation and on-demand capacity counters.
struct QuantumLink {
  int from = -1;
  int to = -1;
  double base_fidelity = 1.0;
  double fidelity_threshold = 0.0;
  int reserve_capacity = 0;
  int ondemand_capacity = 0;
  int fiber = -1;

  bool operator==(const QuantumLink&) const = default;
};

class NetworkTopology {
 public:
  int add_node(QuantumNode node);
  // Adds i->j and j->i sharing one fiber. Returns the id of i->j.
  int add_fiber(int from, int to, double base_fidelity,
                double fidelity_threshold, int reserve_capacity,
                int ondemand_capacity);
  // Adds a single directed link with its own fiber.
  int add_arc(int from, int to, double base_fidelity, double fidelity_threshold,
              int reserve_capacity, int ondemand_capacity);

  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  int num_links() const { return static_cast<int>(links_.size()); }
  int num_fibers() const { return num_fibers_; }
  const std::vector<QuantumNode>& nodes() const { return nodes_; }
  const QuantumNode& node(int n) const { return nodes_.at(n); }
  const std::vector<QuantumLink>& links() const { return links_; }
  const QuantumLink& link(int l) const { return links_.at(l); }
  QuantumLink& mutable_link(int l) { return links_.at(l); }

  // -1 when absent.
  int find_node(const std::string& id) const;
  int find_link(int from, int to) const;
  const std::vector<int>& outgoing(int n) const { return outgoing_.at(n); }
  const std::vector<int>& incoming(int n) const { return incoming_.at(n); }
  // Links of a fiber, in declaration order (one or two entries).
  std::vector<int> fiber_links(int fiber) const;

  void validate() const;

  bool operator==(const NetworkTopology&) const = default;

 private:
  int push_link(QuantumLink link);

  std::vector<QuantumNode> nodes_;
  std::vector<QuantumLink> links_;
  std::vector<std::vector<int>> outgoing_;
  std::vector<std::vector<int>> incoming_;
  std::map<std::string, int> node_index_;
  int num_fibers_ = 0;
};

struct Machine {
  std::string id;
  int qubit_capacity = 1;
  // (request id, circuit id) -> seconds. Missing entries mean 0.
  std::map<std::pair<std::string, std::string>, double> execution_time;

  double exe_time(const std::string& request, const std::string& circuit) const;

  bool operator==(const Machine&) const = default;
};

struct Provider {
  std::string id;
  std::vector<Machine> machines;

  bool operator==(const Provider&) const = default;
};

struct Request {
  std::string id;
  int source = -1;
  int destination = -1;
  std::vector<std::string> circuits;

  bool operator==(const Request&) const = default;
};

struct PairCost {
  double reserve = 0.0;
  double utilize = 0.0;
  double ondemand = 0.0;

  bool operator==(const PairCost&) const = default;
};

struct QubitCost {
  double reserve = 0.0;
  double utilize = 0.0;
  double ondemand = 0.0;
  double overwait_penalty = 0.0;

  bool operator==(const QubitCost&) const = default;
};

// Prices keyed by (node, request) and (circuit, provider). Either key part may
// be "*"; lookups prefer the most specific entry.
class CostModel {
 public:
  static constexpr const char* kAny = "*";

  void set_pair_cost(const std::string& node, const std::string& request,
                     PairCost cost);
  void set_qubit_cost(const std::string& circuit, const std::string& provider,
                      QubitCost cost);

  // Throw InputError when nothing matches.
  const PairCost& pair_cost(const std::string& node,
                            const std::string& request) const;
  const QubitCost& qubit_cost(const std::string& circuit,
                              const std::string& provider) const;

  const std::map<std::pair<std::string, std::string>, PairCost>& pair_costs()
      const {
    return pair_;
  }
  const std::map<std::pair<std::string, std::string>, QubitCost>& qubit_costs()
      const {
    return qubit_;
  }

  // Multiplies every price by `factor`.
  void scale(double factor);

  bool operator==(const CostModel&) const = default;

 private:
  std::map<std::pair<std::string, std::string>, PairCost> pair_;
  std::map<std::pair<std::string, std::string>, QubitCost> qubit_;
};

// One (request, circuit, provider, machine) placement option.
struct QubitSlot {
  int request = 0;
  int circuit = 0;  // index into the request's circuit list
  int provider = 0;
  int machine = 0;

  bool operator==(const QubitSlot&) const = default;
};

struct Instance {
  NetworkTopology topology;
  CostModel costs;
  std::vector<Provider> providers;
  std::vector<Request> requests;

  // Slots in (request, circuit, provider, machine) lexicographic order.
  std::vector<QubitSlot> qubit_slots() const;
  int find_request(const std::string& id) const;

  const PairCost& pair_cost(int link, int request) const;
  // Energy plus repeater setup cost charged per reserved pair on `link`.
  double node_cost(int link) const;
  const QubitCost& qubit_cost(const QubitSlot& slot) const;
  double exe_time(const QubitSlot& slot) const;
  int qubit_capacity(const QubitSlot& slot) const;

  // Checks every invariant, including that all prices resolve.
  void validate() const;

  bool operator==(const Instance&) const = default;
};

NetworkTopology parse_topology(const std::string& text);
CostModel parse_costs(const std::string& text);
// Needs the topology to resolve node ids.
void parse_requests(const std::string& text, const NetworkTopology& topology,
                    std::vector<Provider>& providers,
                    std::vector<Request>& requests);
Instance parse_instance(const std::string& topology_text,
                        const std::string& costs_text,
                        const std::string& requests_text);

std::string serialize_topology(const NetworkTopology& topology);
std::string serialize_costs(const CostModel& costs);
std::string serialize_requests(const Instance& instance);

std::string read_file(const std::string& path);

}  // namespace qcc
