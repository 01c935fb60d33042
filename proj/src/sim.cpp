#include "fihr/sim.hpp"

#include <cmath>
#include <stdexcept>

namespace fihr::sim {

double default_comr_max(const net::FieldConfig& field) { return 0.5 * field.max_bs_distance(); }

SimConfig::SimConfig(const net::FieldConfig& f)
    : field(f),
      proto(proto::ProtocolConfig::defaults(f, default_comr_max(f))),
      fuzzy(fuzzy::FuzzyConfig::defaults(f.initial_energy, f.max_bs_distance(),
                                         default_comr_max(f))) {}

void SimConfig::validate() const {
  if (rounds < 1) throw std::invalid_argument("simulation.rounds must be at least 1");
  if (runs < 1) throw std::invalid_argument("simulation.runs must be at least 1");
  if (!(fault_rate >= 0.0 && fault_rate <= 1.0))
    throw std::invalid_argument("simulation.fault_rate must lie in [0, 1]");
  field.validate();
  proto.validate();
  radio.validate();
}

std::vector<net::NodeId> inject_faults(const proto::ClusterState& state, net::Network& network,
                                       double fault_rate, Rng& rng) {
  std::vector<net::NodeId> failed;
  for (const auto& c : state.clusters) {
    const bool hit = rng.uniform01() < fault_rate;
    if (hit && network.node(c.pch).alive()) {
      network.mark_fault(c.pch);
      failed.push_back(c.pch);
    }
  }
  return failed;
}

namespace {

const SimConfig& validated(const SimConfig& cfg) {
  cfg.validate();
  return cfg;
}

}  // namespace

Simulation::Simulation(const SimConfig& cfg, std::uint64_t run_seed)
    : cfg_(&validated(cfg)),
      network_(net::deploy(cfg.field, run_seed)),
      election_(run_seed, Stream::election),
      faults_(run_seed, Stream::faults),
      epoch_(cfg.field.node_count, cfg.proto.t_probability),
      ledger_(cfg.field.node_count),
      initial_energy_(network_.total_residual()) {}

metrics::RoundMetrics Simulation::snapshot() const {
  metrics::RoundMetrics m;
  m.round = round_;
  m.alive = static_cast<std::uint32_t>(net::alive_count(network_.nodes()));
  m.dead = static_cast<std::uint32_t>(network_.size()) - m.alive;
  m.total_residual = network_.total_residual();
  m.packets_cum = packets_cum_;
  m.failovers_cum = failovers_cum_;
  return m;
}

metrics::RoundMetrics Simulation::run_round() {
  const auto& cfg = *cfg_;
  proto::RoundContext ctx{network_, cfg.proto, cfg.radio, ledger_};

  switch (cfg.protocol) {
    case proto::Protocol::fihr:
      state_ = proto::fihr_cluster_formation(ctx, cfg.fuzzy, election_);
      break;
    case proto::Protocol::ihr:
      state_ = proto::ihr_cluster_formation(ctx, epoch_, round_, election_);
      break;
    case proto::Protocol::dhr:
      state_ = proto::dhr_cluster_formation(ctx, epoch_, round_, election_);
      break;
  }

  inject_faults(state_, network_, cfg.fault_rate, faults_);

  const auto ev = cfg.protocol == proto::Protocol::dhr ? proto::dhr_data_phase(state_, ctx)
                                                       : proto::fihr_data_phase(state_, ctx);
  packets_cum_ += ev.packets_delivered;
  failovers_cum_ += ev.failovers;
  ++round_;
  return snapshot();
}

RunResult run_single(const SimConfig& cfg, std::uint64_t run_seed) {
  Simulation sim(cfg, run_seed);
  RunResult out;
  out.seed = run_seed;
  out.initial_energy = sim.initial_energy();
  out.series.reserve(cfg.rounds + 1);
  out.series.push_back(sim.snapshot());
  while (sim.rounds_done() < cfg.rounds && out.series.back().alive > 0)
    out.series.push_back(sim.run_round());
  while (out.series.size() < cfg.rounds + 1u) {
    auto last = out.series.back();
    ++last.round;
    out.series.push_back(last);
  }
  out.charged_energy = sim.ledger().total();
  out.summary = metrics::summarize(out.series, cfg.field.node_count, cfg.proto.data_bits);
  return out;
}

SimulationResult run_simulation(const SimConfig& cfg) {
  cfg.validate();
  SimulationResult result;
  result.protocol = cfg.protocol;
  result.node_count = cfg.field.node_count;
  result.data_bits = cfg.proto.data_bits;
  result.runs.reserve(cfg.runs);
  for (std::uint32_t k = 0; k < cfg.runs; ++k) result.runs.push_back(run_single(cfg, cfg.seed + k));

  std::vector<metrics::RunRecord> records;
  records.reserve(result.runs.size());
  for (const auto& r : result.runs) records.push_back({r.series, r.summary});
  result.mean = metrics::average_runs(records);
  return result;
}

}  // namespace fihr::sim
