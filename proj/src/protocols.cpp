#include "fihr/protocols.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace fihr::proto {

using net::Network;
using net::Role;

std::string_view to_string(Protocol p) {
  switch (p) {
    case Protocol::fihr: return "fihr";
    case Protocol::ihr: return "ihr";
    case Protocol::dhr: return "dhr";
  }
  return "?";
}

Protocol parse_protocol(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "fihr") return Protocol::fihr;
  if (lower == "ihr") return Protocol::ihr;
  if (lower == "dhr") return Protocol::dhr;
  throw std::invalid_argument("unknown protocol '" + std::string(name) + "'");
}

void ProtocolConfig::validate() const {
  if (!(t_probability > 0.0 && t_probability <= 1.0))
    throw std::invalid_argument("protocol.t_probability must lie in (0, 1]");
  if (!(comr_threshold > 0.0) || !std::isfinite(comr_threshold))
    throw std::invalid_argument("protocol.comr_threshold must be positive");
  if (failover_threshold < 1)
    throw std::invalid_argument("protocol.failover_threshold must be positive");
  if (m_transmissions < 1)
    throw std::invalid_argument("protocol.m_transmissions must be at least 1");
  if (data_bits < 1) throw std::invalid_argument("protocol.data_bits must be positive");
  if (ctrl_bits < 1) throw std::invalid_argument("protocol.ctrl_bits must be positive");
  if (!(adv_radius > 0.0) || !std::isfinite(adv_radius))
    throw std::invalid_argument("protocol.adv_radius must be positive");
}

ProtocolConfig ProtocolConfig::defaults(const net::FieldConfig& field, double comr_max) {
  ProtocolConfig cfg;
  cfg.comr_threshold = 0.9 * comr_max;
  cfg.adv_radius = 0.5 * field.diagonal();
  return cfg;
}

bool ranges_disjoint(double candidate_range, double accepted_range, double separation) {
  return candidate_range <= separation - accepted_range;
}

std::vector<Candidate> resolve_competition(const Network& network,
                                           std::vector<Candidate> candidates, double threshold) {
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) { return a.id < b.id; });
  std::vector<Candidate> accepted;
  for (const auto& c : candidates) {
    if (c.comr > threshold) continue;
    const bool clear = std::all_of(accepted.begin(), accepted.end(), [&](const Candidate& a) {
      return ranges_disjoint(c.comr, a.comr, network.distance(c.id, a.id));
    });
    if (clear) accepted.push_back(c);
  }
  return accepted;
}

double leach_threshold(double p, std::uint64_t round, bool was_ch_this_epoch) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("LEACH probability must lie in (0, 1]");
  if (was_ch_this_epoch) return 0.0;
  const auto epoch = static_cast<std::uint64_t>(std::ceil(1.0 / p));
  const double t = p / (1.0 - p * static_cast<double>(round % epoch));
  return std::min(t, 1.0);
}

LeachEpoch::LeachEpoch(std::size_t node_count, double p)
    : served_(node_count, false), length_(static_cast<std::uint64_t>(std::ceil(1.0 / p))) {}

void LeachEpoch::begin_round(std::uint64_t round) {
  if (round % length_ == 0) std::fill(served_.begin(), served_.end(), false);
}

std::optional<NodeId> select_backup(const Network& network, const std::vector<NodeId>& members) {
  std::optional<NodeId> best;
  for (NodeId m : members) {
    const auto& n = network.node(m);
    if (!n.alive()) continue;
    if (!best || n.residual_energy > network.node(*best).residual_energy ||
        (n.residual_energy == network.node(*best).residual_energy && m < *best))
      best = m;
  }
  return best;
}

namespace {

bool send(RoundContext& ctx, NodeId from, std::uint64_t bits, double d) {
  return ctx.network.spend(from, radio::tx_energy(ctx.radio, bits, d), ctx.ledger);
}

bool receive(RoundContext& ctx, NodeId at, std::uint64_t bits) {
  return ctx.network.spend(at, radio::rx_energy(ctx.radio, bits), ctx.ledger);
}

bool alive(const RoundContext& ctx, NodeId id) { return ctx.network.node(id).alive(); }

// Head receives `bits` from `from` if both are up; the sender pays regardless
// of the receiver's state.
bool unicast(RoundContext& ctx, NodeId from, NodeId to, std::uint64_t bits) {
  if (!send(ctx, from, bits, ctx.network.distance(from, to))) return false;
  return alive(ctx, to) && receive(ctx, to, bits);
}

// Aggregate own reading plus `received` packets and forward one packet to BS.
bool forward_to_bs(RoundContext& ctx, NodeId head, std::uint64_t received) {
  if (!alive(ctx, head)) return false;
  const auto bits = ctx.cfg.data_bits;
  if (!ctx.network.spend(head, radio::aggregation_energy(ctx.radio, bits, received + 1),
                         ctx.ledger))
    return false;
  return send(ctx, head, bits, ctx.network.distance_to_bs(head));
}

std::vector<NodeId> alive_nodes(const Network& network) {
  std::vector<NodeId> ids;
  for (const auto& n : network.nodes())
    if (n.alive()) ids.push_back(n.id);
  return ids;
}

}  // namespace

ClusterState assemble_clusters(RoundContext& ctx, const std::vector<Candidate>& heads) {
  auto& network = ctx.network;
  const auto ctrl = ctx.cfg.ctrl_bits;
  network.reset_roles();

  // Advertisement. A head that cannot afford it never becomes a head.
  std::vector<Cluster> clusters;
  for (const auto& h : heads) {
    if (!send(ctx, h.id, ctrl, h.comr)) continue;
    for (const auto& n : network.nodes())
      if (n.id != h.id && n.alive() && network.distance(n.id, h.id) <= h.comr)
        receive(ctx, n.id, ctrl);
    if (!alive(ctx, h.id)) continue;
    Cluster c;
    c.pch = h.id;
    c.comr = h.comr;
    clusters.push_back(std::move(c));
  }

  ClusterState state;
  auto is_head = [&](NodeId id) {
    return std::any_of(clusters.begin(), clusters.end(),
                       [id](const Cluster& c) { return c.pch == id; });
  };

  // Joins to the nearest live head, lowest head id on ties.
  for (NodeId id : alive_nodes(network)) {
    if (is_head(id)) continue;
    Cluster* nearest = nullptr;
    double best = std::numeric_limits<double>::infinity();
    for (auto& c : clusters) {
      if (!alive(ctx, c.pch)) continue;
      const double d = network.distance(id, c.pch);
      if (d < best || (d == best && nearest && c.pch < nearest->pch)) {
        best = d;
        nearest = &c;
      }
    }
    if (!nearest) {
      state.orphans.push_back(id);
      continue;
    }
    if (!send(ctx, id, ctrl, best)) continue;
    if (alive(ctx, nearest->pch)) receive(ctx, nearest->pch, ctrl);
    nearest->members.push_back(id);
  }

  // Backup selection and notification.
  for (auto& c : clusters) {
    if (!alive(ctx, c.pch) || c.members.empty()) continue;
    c.bch = select_backup(network, c.members);
    if (!c.bch) continue;
    if (send(ctx, c.pch, ctrl, c.comr))
      for (NodeId m : c.members)
        if (alive(ctx, m)) receive(ctx, m, ctrl);
  }

  // Drop whatever died during formation. Members of a dead head fall back
  // to direct transmission.
  for (auto& c : clusters) {
    std::erase_if(c.members, [&](NodeId m) { return !alive(ctx, m); });
    if (c.bch && !alive(ctx, *c.bch)) c.bch.reset();
    if (!alive(ctx, c.pch)) {
      state.orphans.insert(state.orphans.end(), c.members.begin(), c.members.end());
      continue;
    }
    network.set_role(c.pch, Role::pch);
    if (c.bch) network.set_role(*c.bch, Role::bch);
    state.clusters.push_back(std::move(c));
  }
  std::erase_if(state.orphans, [&](NodeId m) { return !alive(ctx, m); });
  std::sort(state.orphans.begin(), state.orphans.end());
  return state;
}

ClusterState fihr_cluster_formation(RoundContext& ctx, const fuzzy::FuzzyConfig& fuzzy,
                                    Rng& rng) {
  std::vector<Candidate> candidates;
  for (NodeId id : alive_nodes(ctx.network)) {
    if (!(rng.uniform01() < ctx.cfg.t_probability)) continue;
    const double comr = fuzzy::compute_comr(ctx.network.node(id).residual_energy,
                                            ctx.network.distance_to_bs(id), fuzzy);
    candidates.push_back({id, comr});
  }
  return assemble_clusters(ctx, resolve_competition(ctx.network, std::move(candidates),
                                                    ctx.cfg.comr_threshold));
}

ClusterState ihr_cluster_formation(RoundContext& ctx, LeachEpoch& epoch, std::uint64_t round,
                                   Rng& rng) {
  epoch.begin_round(round);
  std::vector<Candidate> heads;
  for (NodeId id : alive_nodes(ctx.network)) {
    const double t = leach_threshold(ctx.cfg.t_probability, round, epoch.served(id));
    if (rng.uniform01() < t) {
      epoch.mark_served(id);
      heads.push_back({id, ctx.cfg.adv_radius});
    }
  }
  return assemble_clusters(ctx, heads);
}

ClusterState dhr_cluster_formation(RoundContext& ctx, LeachEpoch& epoch, std::uint64_t round,
                                   Rng& rng) {
  return ihr_cluster_formation(ctx, epoch, round, rng);
}

namespace {

std::uint64_t deliver_orphans(const ClusterState& state, RoundContext& ctx) {
  std::uint64_t delivered = 0;
  for (NodeId id : state.orphans)
    if (alive(ctx, id) && send(ctx, id, ctx.cfg.data_bits, ctx.network.distance_to_bs(id)))
      ++delivered;
  return delivered;
}

}  // namespace

RoundEvents fihr_data_phase(ClusterState& state, RoundContext& ctx) {
  RoundEvents ev;
  const auto ctrl = ctx.cfg.ctrl_bits;
  for (std::uint32_t cycle = 0; cycle < ctx.cfg.m_transmissions; ++cycle) {
    for (auto& c : state.clusters) {
      // Aliveness inquiry.
      if (!c.failed_over && c.bch && alive(ctx, *c.bch)) {
        const double d = ctx.network.distance(*c.bch, c.pch);
        if (send(ctx, *c.bch, ctrl, d)) {
          ++c.inquiry_counter;
          if (alive(ctx, c.pch) && receive(ctx, c.pch, ctrl) && send(ctx, c.pch, ctrl, d) &&
              alive(ctx, *c.bch) && receive(ctx, *c.bch, ctrl))
            --c.inquiry_counter;
        }
        if (c.inquiry_counter > ctx.cfg.failover_threshold && alive(ctx, *c.bch) &&
            send(ctx, *c.bch, ctrl, c.comr)) {
          for (NodeId m : c.members)
            if (m != *c.bch && alive(ctx, m)) receive(ctx, m, ctrl);
          c.failed_over = true;
          ++ev.failovers;
        }
      }

      const NodeId head = c.acting_head();
      std::uint64_t received = 0;
      for (NodeId m : c.members)
        if (m != head && alive(ctx, m) && unicast(ctx, m, head, ctx.cfg.data_bits)) ++received;
      if (forward_to_bs(ctx, head, received)) ++ev.packets_delivered;
    }
    ev.packets_delivered += deliver_orphans(state, ctx);
  }
  return ev;
}

RoundEvents ihr_data_phase(ClusterState& state, RoundContext& ctx) {
  return fihr_data_phase(state, ctx);
}

RoundEvents dhr_data_phase(ClusterState& state, RoundContext& ctx) {
  RoundEvents ev;
  const auto bits = ctx.cfg.data_bits;
  for (std::uint32_t cycle = 0; cycle < ctx.cfg.m_transmissions; ++cycle) {
    for (auto& c : state.clusters) {
      std::uint64_t at_primary = 0;
      std::uint64_t at_backup = 0;
      for (NodeId m : c.members) {
        if (m == c.bch || !alive(ctx, m)) continue;
        if (unicast(ctx, m, c.pch, bits)) ++at_primary;
        if (c.bch && alive(ctx, m) && unicast(ctx, m, *c.bch, bits)) ++at_backup;
      }
      bool delivered = forward_to_bs(ctx, c.pch, at_primary);
      if (c.bch) delivered = forward_to_bs(ctx, *c.bch, at_backup) || delivered;
      if (delivered) ++ev.packets_delivered;
    }
    ev.packets_delivered += deliver_orphans(state, ctx);
  }
  return ev;
}

}  // namespace fihr::proto
