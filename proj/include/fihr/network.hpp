#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace fihr::net {

using NodeId = std::uint32_t;

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

double distance(Point a, Point b);

enum class NodeStatus { alive, energy_dead, fault_dead };
enum class Role { nch, pch, bch };

struct Node {
  NodeId id = 0;
  Point position;
  double residual_energy = 0.0;
  NodeStatus status = NodeStatus::alive;
  Role role = Role::nch;

  bool alive() const { return status == NodeStatus::alive; }
};

struct FieldConfig {
  double width = 100.0;
  double height = 100.0;
  Point bs_position{50.0, 50.0};
  std::uint32_t node_count = 100;
  double initial_energy = 3.0;

  void validate() const;

  // Farthest any in-field point can be from the base station.
  double max_bs_distance() const;
  double diagonal() const;
};

/// Energy actually drained from each node. A node that cannot afford an
/// action is drained of whatever it had left, so the ledger always matches
/// the change in stored energy.
class EnergyLedger {
 public:
  explicit EnergyLedger(std::size_t node_count = 0) : spent_(node_count, 0.0) {}

  void record(NodeId id, double joules) {
    spent_[id] += joules;
    total_ += joules;
  }
  double total() const { return total_; }
  const std::vector<double>& per_node() const { return spent_; }

 private:
  std::vector<double> spent_;
  double total_ = 0.0;
};

class Network {
 public:
  Network(FieldConfig cfg, std::vector<Node> nodes);

  const FieldConfig& config() const { return cfg_; }
  Point bs() const { return cfg_.bs_position; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& node(NodeId id) const { return nodes_.at(id); }
  std::size_t size() const { return nodes_.size(); }

  double distance(NodeId a, NodeId b) const;
  double distance_to_bs(NodeId id) const;

  /// Spend `joules` on one action. Dead nodes do nothing and return false.
  /// When the cost exceeds the residual the action does not happen: the
  /// node is emptied, marked energy-dead, and false is returned. A node
  /// left at exactly zero also dies, after completing the action.
  bool spend(NodeId id, double joules, EnergyLedger& ledger);

  void mark_fault(NodeId id);
  void set_role(NodeId id, Role role);
  void reset_roles();

  double total_residual() const;

 private:
  void kill(Node& n, NodeStatus status);

  FieldConfig cfg_;
  std::vector<Node> nodes_;
};

// Uniform independent positions; ids 0..n-1; deterministic in `seed`.
Network deploy(const FieldConfig& cfg, std::uint64_t seed);

std::size_t alive_count(std::span<const Node> nodes);

}  // namespace fihr::net
