#pragma once

#include <cstdint>
#include <vector>

#include "fihr/fuzzy.hpp"
#include "fihr/metrics.hpp"
#include "fihr/network.hpp"
#include "fihr/protocols.hpp"
#include "fihr/radio.hpp"
#include "fihr/rng.hpp"

namespace fihr::sim {

struct SimConfig {
  proto::Protocol protocol = proto::Protocol::fihr;
  std::uint32_t rounds = 1000;
  net::FieldConfig field;
  proto::ProtocolConfig proto;
  radio::RadioParams radio;
  fuzzy::FuzzyConfig fuzzy;
  double fault_rate = 0.0;  // per head, per round
  std::uint64_t seed = 1;
  std::uint32_t runs = 20;

  // Every field-derived default (fuzzy universes, ComR threshold,
  // advertisement radius) computed from `field`.
  explicit SimConfig(const net::FieldConfig& field = {});

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

// Default output-range ceiling: half the farthest node-to-BS distance.
double default_comr_max(const net::FieldConfig& field);

/// Each current head independently becomes fault-dead with probability
/// `fault_rate`. Returns the failed ids in cluster order.
std::vector<net::NodeId> inject_faults(const proto::ClusterState& state, net::Network& network,
                                       double fault_rate, Rng& rng);

/// One independent run: owns its network and random streams.
class Simulation {
 public:
  Simulation(const SimConfig& cfg, std::uint64_t run_seed);

  // formation -> fault injection -> data phase; returns the end-of-round snapshot.
  metrics::RoundMetrics run_round();

  metrics::RoundMetrics snapshot() const;
  const net::Network& network() const { return network_; }
  net::Network& network() { return network_; }
  const proto::ClusterState& clusters() const { return state_; }
  const net::EnergyLedger& ledger() const { return ledger_; }
  double initial_energy() const { return initial_energy_; }
  std::uint32_t rounds_done() const { return round_; }

 private:
  const SimConfig* cfg_;
  net::Network network_;
  Rng election_;
  Rng faults_;
  proto::LeachEpoch epoch_;
  proto::ClusterState state_;
  net::EnergyLedger ledger_;
  double initial_energy_;
  std::uint32_t round_ = 0;
  std::uint64_t packets_cum_ = 0;
  std::uint64_t failovers_cum_ = 0;
};

struct RunResult {
  std::uint64_t seed = 0;
  std::vector<metrics::RoundMetrics> series;  // rounds 0..R
  metrics::Summary summary;
  double initial_energy = 0.0;
  double charged_energy = 0.0;  // sum of every cost drained from nodes
};

struct SimulationResult {
  proto::Protocol protocol = proto::Protocol::fihr;
  std::uint32_t node_count = 0;
  std::uint64_t data_bits = 0;
  std::vector<RunResult> runs;
  metrics::Averaged mean;
};

// Runs `rounds` rounds or until no node is alive; the remaining rows repeat
// the final state.
RunResult run_single(const SimConfig& cfg, std::uint64_t run_seed);

// Runs with seeds seed, seed+1, ... and averages them.
SimulationResult run_simulation(const SimConfig& cfg);

}  // namespace fihr::sim
