#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "fihr/protocols.hpp"
#include "fihr/sim.hpp"

using namespace fihr;
using namespace fihr::proto;
using net::NodeId;
using net::Point;

namespace {

net::Network make_network(const std::vector<Point>& points, double energy = 3.0) {
  net::FieldConfig field;
  field.node_count = static_cast<std::uint32_t>(points.size());
  field.initial_energy = energy;
  std::vector<net::Node> nodes;
  for (std::size_t i = 0; i < points.size(); ++i)
    nodes.push_back({static_cast<NodeId>(i), points[i], energy, net::NodeStatus::alive, net::Role::nch});
  return net::Network(field, std::move(nodes));
}

struct Bench {
  net::Network network;
  ProtocolConfig cfg;
  radio::RadioParams radio;
  net::EnergyLedger ledger;
  RoundContext ctx;

  explicit Bench(net::Network n)
      : network(std::move(n)),
        cfg(ProtocolConfig::defaults(network.config(), sim::default_comr_max(network.config()))),
        ledger(network.size()),
        ctx{network, cfg, radio, ledger} {}

  // One cluster headed by node 0 with every other node as a member.
  ClusterState single_cluster(double range = 100.0) {
    return assemble_clusters(ctx, {{0, range}});
  }
};

// Node 0 heads; node 1 has the most energy so it becomes backup.
std::vector<Point> five_member_layout() {
  return {{50, 50}, {45, 50}, {55, 50}, {50, 45}, {50, 55}, {52, 52}};
}

}  // namespace

TEST_CASE("protocol names") {
  CHECK(parse_protocol("FIHR") == Protocol::fihr);
  CHECK(parse_protocol("dhr") == Protocol::dhr);
  CHECK(to_string(Protocol::ihr) == "ihr");
  CHECK_THROWS_AS(parse_protocol("leach"), std::invalid_argument);
}

TEST_CASE("non-overlap competition") {
  auto net = make_network({{0, 0}, {100, 0}, {0, 50}});
  SUBCASE("100 m apart, 30 and 30: both accepted") {
    CHECK(ranges_disjoint(30, 30, 100));
    const auto acc = resolve_competition(net, {{1, 30}, {0, 30}}, 1e9);
    REQUIRE(acc.size() == 2);
    CHECK(acc[0].id == 0);
    CHECK(acc[1].id == 1);
  }
  SUBCASE("50 m apart, 30 and 30: lower id wins") {
    CHECK_FALSE(ranges_disjoint(30, 30, 50));
    const auto acc = resolve_competition(net, {{2, 30}, {0, 30}}, 1e9);
    REQUIRE(acc.size() == 1);
    CHECK(acc[0].id == 0);
  }
  SUBCASE("candidates above the threshold withdraw") {
    const auto acc = resolve_competition(net, {{0, 40}, {1, 20}}, 35);
    REQUIRE(acc.size() == 1);
    CHECK(acc[0].id == 1);
  }
}

TEST_CASE("single-node network forms one bare cluster") {
  Bench b(make_network({{50, 40}}));
  b.cfg.t_probability = 1.0;
  const auto fuzzy = fuzzy::FuzzyConfig::defaults(3.0, 70.0, 35.0);
  Rng rng(1, Stream::election);
  auto state = fihr_cluster_formation(b.ctx, fuzzy, rng);
  REQUIRE(state.clusters.size() == 1);
  CHECK(state.clusters[0].pch == 0);
  CHECK_FALSE(state.clusters[0].bch);
  CHECK(state.clusters[0].members.empty());
  CHECK(state.orphans.empty());
  CHECK(fihr_data_phase(state, b.ctx).packets_delivered == 3);
}

TEST_CASE("LEACH threshold") {
  CHECK(leach_threshold(0.1, 0, false) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(leach_threshold(0.1, 9, false) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(leach_threshold(0.1, 9, false) <= 1.0);
  CHECK(leach_threshold(0.1, 10, false) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(leach_threshold(0.3, 4, true) == 0.0);
  CHECK_THROWS(leach_threshold(0.0, 1, false));
}

TEST_CASE("IHR election averages about 10 heads per round at p = 0.1") {
  double heads = 0;
  int rounds = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Bench b(net::deploy(net::FieldConfig{}, seed));
    // Fresh energy each round so nobody dies and the count measures the election only.
    b.network = net::deploy(net::FieldConfig{}, seed);
    LeachEpoch epoch(b.network.size(), b.cfg.t_probability);
    Rng rng(seed, Stream::election);
    for (std::uint64_t r = 0; r < 100; ++r) {
      heads += static_cast<double>(ihr_cluster_formation(b.ctx, epoch, r, rng).clusters.size());
      ++rounds;
    }
  }
  CHECK(heads / rounds == doctest::Approx(10.0).epsilon(0.3));
}

TEST_CASE("no heads elected leaves every alive node orphaned") {
  Bench b(make_network(five_member_layout()));
  const auto state = assemble_clusters(b.ctx, {});
  CHECK(state.clusters.empty());
  CHECK(state.orphans.size() == 6);
}

TEST_CASE("backup is the member with the most residual energy") {
  Bench b(make_network(five_member_layout()));
  net::EnergyLedger scratch(6);
  b.network.spend(1, 0.5, scratch);
  b.network.spend(2, 0.1, scratch);
  b.network.spend(3, 0.2, scratch);
  b.network.spend(5, 0.1, scratch);
  // Node 4 is untouched and holds the most.
  CHECK(select_backup(b.network, {1, 2, 3, 4, 5}) == NodeId{4});
  CHECK(select_backup(b.network, {2, 5}) == NodeId{2});
  CHECK_FALSE(select_backup(b.network, {}));

  const auto state = b.single_cluster();
  REQUIRE(state.clusters.size() == 1);
  CHECK(state.clusters[0].bch == NodeId{4});
}

TEST_CASE("formation yields a partition with consistent roles") {
  for (auto protocol : {Protocol::fihr, Protocol::ihr}) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const sim::SimConfig cfg;
      Bench b(net::deploy(cfg.field, seed));
      Rng rng(seed, Stream::election);
      LeachEpoch epoch(b.network.size(), b.cfg.t_probability);
      const auto state = protocol == Protocol::fihr
                             ? fihr_cluster_formation(b.ctx, cfg.fuzzy, rng)
                             : ihr_cluster_formation(b.ctx, epoch, 0, rng);
      std::multiset<NodeId> seen(state.orphans.begin(), state.orphans.end());
      for (const auto& c : state.clusters) {
        seen.insert(c.pch);
        seen.insert(c.members.begin(), c.members.end());
        CHECK(b.network.node(c.pch).role == net::Role::pch);
        if (c.bch) {
          CHECK(*c.bch != c.pch);
          CHECK(std::find(c.members.begin(), c.members.end(), *c.bch) != c.members.end());
          CHECK(b.network.node(*c.bch).role == net::Role::bch);
        }
      }
      for (const auto& n : b.network.nodes())
        CHECK(seen.count(n.id) == (n.alive() ? 1u : 0u));

      if (protocol == Protocol::fihr)
        for (std::size_t i = 0; i < state.clusters.size(); ++i)
          for (std::size_t j = i + 1; j < state.clusters.size(); ++j) {
            const auto& a = state.clusters[i];
            const auto& c = state.clusters[j];
            CHECK(a.comr + c.comr <= b.network.distance(a.pch, c.pch) + 1e-12);
          }
    }
  }
}

TEST_CASE("informer data phase") {
  Bench b(make_network(five_member_layout()));
  auto state = b.single_cluster();
  REQUIRE(state.clusters.size() == 1);
  REQUIRE(state.clusters[0].bch);

  SUBCASE("no faults: every cycle delivered, every inquiry answered") {
    const auto ev = fihr_data_phase(state, b.ctx);
    CHECK(ev.packets_delivered == 3);
    CHECK(ev.failovers == 0);
    CHECK(state.clusters[0].inquiry_counter == 0);
  }
  SUBCASE("primary down, threshold 1: backup takes over for the last two cycles") {
    b.cfg.failover_threshold = 1;
    b.network.mark_fault(0);
    const auto ev = ihr_data_phase(state, b.ctx);
    CHECK(ev.failovers == 1);
    CHECK(ev.packets_delivered == 2);
    CHECK(state.clusters[0].failed_over);
  }
  SUBCASE("primary down, threshold 3: nothing gets through this round") {
    b.network.mark_fault(0);
    const auto ev = fihr_data_phase(state, b.ctx);
    CHECK(ev.failovers == 0);
    CHECK(ev.packets_delivered == 0);
    CHECK(state.clusters[0].inquiry_counter == 3);
  }
  SUBCASE("faulted head spends nothing") {
    b.network.mark_fault(0);
    const double before = b.network.node(0).residual_energy;
    const auto spent_before = b.ledger.per_node()[0];
    fihr_data_phase(state, b.ctx);
    CHECK(b.network.node(0).residual_energy == before);
    CHECK(b.ledger.per_node()[0] == spent_before);
  }
}

TEST_CASE("dual-homed data phase") {
  Bench b(make_network(five_member_layout()));
  auto state = b.single_cluster();
  REQUIRE(state.clusters[0].bch);

  SUBCASE("no faults") {
    const auto ev = dhr_data_phase(state, b.ctx);
    CHECK(ev.packets_delivered == 3);
    CHECK(ev.failovers == 0);
  }
  SUBCASE("primary down, backup alive: still every cycle") {
    b.network.mark_fault(0);
    CHECK(dhr_data_phase(state, b.ctx).packets_delivered == 3);
  }
  SUBCASE("both heads down") {
    b.network.mark_fault(0);
    b.network.mark_fault(*state.clusters[0].bch);
    CHECK(dhr_data_phase(state, b.ctx).packets_delivered == 0);
  }
  SUBCASE("member pays one transmission per head") {
    const NodeId m = 3;
    const double before = b.ledger.per_node()[m];
    b.cfg.m_transmissions = 1;
    dhr_data_phase(state, b.ctx);
    const double expected = radio::tx_energy(b.radio, b.cfg.data_bits, b.network.distance(m, 0)) +
                            radio::tx_energy(b.radio, b.cfg.data_bits,
                                             b.network.distance(m, *state.clusters[0].bch));
    CHECK(b.ledger.per_node()[m] - before == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("dual-homed member transmit cost is exactly twice the informer one") {
  // Primary and backup sit symmetrically about the member.
  const std::vector<Point> layout{{40, 50}, {60, 50}, {50, 62}};
  auto run = [&](bool dual) {
    Bench b(make_network(layout));
    net::EnergyLedger scratch(3);
    b.network.spend(2, 0.5, scratch);  // keep node 1 as the backup
    b.cfg.m_transmissions = 1;
    auto state = b.single_cluster();
    REQUIRE(state.clusters[0].bch == NodeId{1});
    const double before = b.ledger.per_node()[2];
    if (dual)
      dhr_data_phase(state, b.ctx);
    else
      ihr_data_phase(state, b.ctx);
    return b.ledger.per_node()[2] - before;
  };
  const double single = run(false);
  const double dual = run(true);
  CHECK(single > 0.0);
  CHECK(dual == 2.0 * single);
}

TEST_CASE("energy charged in a round matches the drop in stored energy") {
  for (auto protocol : {Protocol::fihr, Protocol::ihr, Protocol::dhr}) {
    const sim::SimConfig cfg;
    Bench b(net::deploy(cfg.field, 3));
    Rng rng(3, Stream::election);
    LeachEpoch epoch(b.network.size(), b.cfg.t_probability);
    for (std::uint64_t r = 0; r < 30; ++r) {
      const double before = b.network.total_residual();
      const double charged_before = b.ledger.total();
      auto state = protocol == Protocol::fihr ? fihr_cluster_formation(b.ctx, cfg.fuzzy, rng)
                                              : ihr_cluster_formation(b.ctx, epoch, r, rng);
      const auto ev = protocol == Protocol::dhr ? dhr_data_phase(state, b.ctx)
                                                : fihr_data_phase(state, b.ctx);
      CHECK(ev.failovers == 0);
      const double dropped = before - b.network.total_residual();
      const double charged = b.ledger.total() - charged_before;
      CHECK(std::abs(dropped - charged) <= 1e-9 * charged);
    }
  }
}

TEST_CASE("fault-free rounds deliver one packet per cluster and orphan per cycle") {
  const sim::SimConfig cfg;
  for (auto protocol : {Protocol::fihr, Protocol::ihr, Protocol::dhr}) {
    Bench b(net::deploy(cfg.field, 11));
    Rng rng(11, Stream::election);
    LeachEpoch epoch(b.network.size(), b.cfg.t_probability);
    auto state = protocol == Protocol::fihr ? fihr_cluster_formation(b.ctx, cfg.fuzzy, rng)
                                            : ihr_cluster_formation(b.ctx, epoch, 0, rng);
    const auto expected = (state.clusters.size() + state.orphans.size()) * b.cfg.m_transmissions;
    const auto ev = protocol == Protocol::dhr ? dhr_data_phase(state, b.ctx)
                                              : fihr_data_phase(state, b.ctx);
    CHECK(ev.packets_delivered == expected);
  }
}
