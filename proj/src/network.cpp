#include "fihr/network.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fihr/rng.hpp"

namespace fihr::net {

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

void FieldConfig::validate() const {
  if (!(width > 0.0) || !std::isfinite(width))
    throw std::invalid_argument("field.width must be positive");
  if (!(height > 0.0) || !std::isfinite(height))
    throw std::invalid_argument("field.height must be positive");
  if (!(bs_position.x >= 0.0 && bs_position.x <= width))
    throw std::invalid_argument("field.bs_x must lie inside the field");
  if (!(bs_position.y >= 0.0 && bs_position.y <= height))
    throw std::invalid_argument("field.bs_y must lie inside the field");
  if (node_count < 1) throw std::invalid_argument("field.node_count must be at least 1");
  if (!(initial_energy > 0.0) || !std::isfinite(initial_energy))
    throw std::invalid_argument("field.initial_energy must be positive");
}

double FieldConfig::max_bs_distance() const {
  const double dx = std::max(bs_position.x, width - bs_position.x);
  const double dy = std::max(bs_position.y, height - bs_position.y);
  return std::hypot(dx, dy);
}

double FieldConfig::diagonal() const { return std::hypot(width, height); }

Network::Network(FieldConfig cfg, std::vector<Node> nodes)
    : cfg_(cfg), nodes_(std::move(nodes)) {
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (nodes_[i].id != i) throw std::invalid_argument("node ids must be 0..n-1 in order");
}

double Network::distance(NodeId a, NodeId b) const {
  return net::distance(nodes_.at(a).position, nodes_.at(b).position);
}

double Network::distance_to_bs(NodeId id) const {
  return net::distance(nodes_.at(id).position, cfg_.bs_position);
}

bool Network::spend(NodeId id, double joules, EnergyLedger& ledger) {
  auto& n = nodes_.at(id);
  if (!n.alive()) return false;
  if (joules > n.residual_energy) {
    ledger.record(id, n.residual_energy);
    n.residual_energy = 0.0;
    kill(n, NodeStatus::energy_dead);
    return false;
  }
  n.residual_energy -= joules;
  ledger.record(id, joules);
  if (n.residual_energy <= 0.0) {
    n.residual_energy = 0.0;
    kill(n, NodeStatus::energy_dead);
  }
  return true;
}

void Network::mark_fault(NodeId id) {
  auto& n = nodes_.at(id);
  if (n.alive()) kill(n, NodeStatus::fault_dead);
}

void Network::set_role(NodeId id, Role role) {
  auto& n = nodes_.at(id);
  if (!n.alive() && role != Role::nch) throw std::logic_error("dead node cannot hold a role");
  n.role = role;
}

void Network::reset_roles() {
  for (auto& n : nodes_) n.role = Role::nch;
}

double Network::total_residual() const {
  double sum = 0.0;
  for (const auto& n : nodes_) sum += n.residual_energy;
  return sum;
}

void Network::kill(Node& n, NodeStatus status) {
  n.status = status;
  n.role = Role::nch;
}

Network deploy(const FieldConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  Rng rng(seed, Stream::deployment);
  std::vector<Node> nodes;
  nodes.reserve(cfg.node_count);
  for (NodeId i = 0; i < cfg.node_count; ++i) {
    const double x = rng.uniform(0.0, cfg.width);
    const double y = rng.uniform(0.0, cfg.height);
    nodes.push_back(Node{i, {x, y}, cfg.initial_energy, NodeStatus::alive, Role::nch});
  }
  return Network(cfg, std::move(nodes));
}

std::size_t alive_count(std::span<const Node> nodes) {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const Node& n) { return n.alive(); }));
}

}  // namespace fihr::net
