#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "fihr/fuzzy.hpp"
#include "fihr/network.hpp"
#include "fihr/radio.hpp"
#include "fihr/rng.hpp"

namespace fihr::proto {

using net::NodeId;

enum class Protocol { fihr, ihr, dhr };

std::string_view to_string(Protocol p);
// Accepts "fihr", "ihr", "dhr" (case-insensitive); throws std::invalid_argument.
Protocol parse_protocol(std::string_view name);

struct ProtocolConfig {
  double t_probability = 0.1;       // tentative-CH / LEACH probability
  double comr_threshold = 0.0;      // m; candidates above it withdraw
  std::uint32_t failover_threshold = 3;
  std::uint32_t m_transmissions = 3;
  std::uint64_t data_bits = 32000;
  std::uint64_t ctrl_bits = 160;
  double adv_radius = 0.0;          // m; IHR/DHR advertisement range

  void validate() const;

  // comr_threshold = 0.9 * comr_max, adv_radius = half the field diagonal.
  static ProtocolConfig defaults(const net::FieldConfig& field, double comr_max);
};

struct Cluster {
  NodeId pch = 0;
  double comr = 0.0;  // advertisement / notification range
  std::optional<NodeId> bch;
  std::vector<NodeId> members;  // excludes the PCH, includes the BCH
  std::uint32_t inquiry_counter = 0;
  bool failed_over = false;

  NodeId acting_head() const { return failed_over ? *bch : pch; }
};

struct ClusterState {
  std::vector<Cluster> clusters;
  std::vector<NodeId> orphans;  // alive nodes with no head this round
};

struct RoundEvents {
  std::uint64_t packets_delivered = 0;
  std::uint64_t failovers = 0;
};

/// Everything a protocol step mutates or reads for one run.
struct RoundContext {
  net::Network& network;
  const ProtocolConfig& cfg;
  const radio::RadioParams& radio;
  net::EnergyLedger& ledger;
};

// Non-overlap test between a candidate and an already accepted head:
// candidate_range <= separation - accepted_range.
bool ranges_disjoint(double candidate_range, double accepted_range, double separation);

struct Candidate {
  NodeId id;
  double comr;
};

/// FIHR competition over tentative heads. Candidates above `threshold`
/// withdraw; the rest are taken in ascending id and accepted only if their
/// disk is disjoint from every head accepted so far.
std::vector<Candidate> resolve_competition(const net::Network& network,
                                           std::vector<Candidate> candidates, double threshold);

// Canonical LEACH election threshold, clamped to 1.
double leach_threshold(double p, std::uint64_t round, bool was_ch_this_epoch);

/// Tracks which nodes already served as head in the current LEACH epoch
/// (ceil(1/p) rounds).
class LeachEpoch {
 public:
  LeachEpoch(std::size_t node_count, double p);

  void begin_round(std::uint64_t round);
  bool served(NodeId id) const { return served_[id]; }
  void mark_served(NodeId id) { served_[id] = true; }
  std::uint64_t length() const { return length_; }

 private:
  std::vector<bool> served_;
  std::uint64_t length_;
};

ClusterState fihr_cluster_formation(RoundContext& ctx, const fuzzy::FuzzyConfig& fuzzy, Rng& rng);

// IHR and DHR share LEACH-style formation; `round` is zero-based.
ClusterState ihr_cluster_formation(RoundContext& ctx, LeachEpoch& epoch, std::uint64_t round,
                                   Rng& rng);
ClusterState dhr_cluster_formation(RoundContext& ctx, LeachEpoch& epoch, std::uint64_t round,
                                   Rng& rng);

/// Builds clusters around already chosen heads: advertisement, joins,
/// backup selection and backup notification, charging every message.
/// Heads are (id, advertisement range) pairs.
ClusterState assemble_clusters(RoundContext& ctx, const std::vector<Candidate>& heads);

// Backup = alive member with the most residual energy, lowest id on ties.
std::optional<NodeId> select_backup(const net::Network& network, const std::vector<NodeId>& members);

// Informer-homed data phase, shared by FIHR and IHR: backup heads poll their
// primary each cycle and redirect the cluster once the miss counter exceeds
// the failover threshold.
RoundEvents fihr_data_phase(ClusterState& state, RoundContext& ctx);
RoundEvents ihr_data_phase(ClusterState& state, RoundContext& ctx);

// Dual-homed data phase: members send every packet to both heads.
RoundEvents dhr_data_phase(ClusterState& state, RoundContext& ctx);

}  // namespace fihr::proto
