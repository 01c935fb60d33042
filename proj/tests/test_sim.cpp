#include <doctest.h>

#include <cmath>

#include "fihr/sim.hpp"

using namespace fihr;
using namespace fihr::sim;

namespace {

proto::ClusterState ten_heads() {
  proto::ClusterState state;
  for (net::NodeId i = 0; i < 10; ++i) {
    proto::Cluster c;
    c.pch = i;
    state.clusters.push_back(c);
  }
  return state;
}

SimConfig short_config(proto::Protocol p, std::uint32_t rounds) {
  SimConfig cfg;
  cfg.protocol = p;
  cfg.rounds = rounds;
  cfg.runs = 1;
  return cfg;
}

}  // namespace

TEST_CASE("fault injection") {
  net::FieldConfig field;
  field.node_count = 10;
  const auto state = ten_heads();

  SUBCASE("rate 0 never fails anyone") {
    auto network = net::deploy(field, 1);
    Rng rng(1, Stream::faults);
    for (int i = 0; i < 100; ++i) CHECK(inject_faults(state, network, 0.0, rng).empty());
    CHECK(net::alive_count(network.nodes()) == 10);
  }
  SUBCASE("rate 1 fails every head") {
    auto network = net::deploy(field, 1);
    Rng rng(1, Stream::faults);
    CHECK(inject_faults(state, network, 1.0, rng).size() == 10);
    for (const auto& n : network.nodes()) CHECK(n.status == net::NodeStatus::fault_dead);
  }
  SUBCASE("rate 0.3 fails about three of ten") {
    Rng rng(2024, Stream::faults);
    double total = 0;
    for (int trial = 0; trial < 1000; ++trial) {
      auto network = net::deploy(field, 1);
      total += static_cast<double>(inject_faults(state, network, 0.3, rng).size());
    }
    CHECK(std::abs(total / 1000 - 3.0) <= 0.5);
  }
}

TEST_CASE("config validation") {
  SimConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.rounds = 0;
  CHECK_THROWS_WITH(cfg.validate(), doctest::Contains("rounds"));
  cfg = SimConfig{};
  cfg.fault_rate = 1.5;
  CHECK_THROWS_WITH(cfg.validate(), doctest::Contains("fault_rate"));
  cfg = SimConfig{};
  cfg.runs = 0;
  CHECK_THROWS_WITH(cfg.validate(), doctest::Contains("runs"));
  CHECK_THROWS(run_simulation(cfg));
}

TEST_CASE("derived defaults follow the field") {
  const SimConfig cfg;
  CHECK(default_comr_max(cfg.field) == doctest::Approx(std::hypot(50.0, 50.0) / 2));
  CHECK(cfg.fuzzy.distance.hi() == doctest::Approx(std::hypot(50.0, 50.0)));
  CHECK(cfg.fuzzy.energy.hi() == 3.0);
  CHECK(cfg.fuzzy.comr.hi() == doctest::Approx(std::hypot(50.0, 50.0) / 2));
}

TEST_CASE("first round of scenario 1") {
  const auto cfg = short_config(proto::Protocol::fihr, 1);
  Simulation s(cfg, 1);
  const auto r0 = s.snapshot();
  CHECK(r0.round == 0);
  CHECK(r0.total_residual == 300.0);
  CHECK(s.initial_energy() == 300.0);
  const auto r1 = s.run_round();
  CHECK(r1.round == 1);
  CHECK(r1.total_residual < 300.0);
  CHECK(r1.alive == 100);
  CHECK(r1.failovers_cum == 0);
}

TEST_CASE("a round on a dead network changes nothing") {
  const auto cfg = short_config(proto::Protocol::ihr, 5);
  Simulation s(cfg, 4);
  for (net::NodeId i = 0; i < s.network().size(); ++i) s.network().mark_fault(i);
  const auto before = s.snapshot();
  const auto after = s.run_round();
  CHECK(after.alive == 0);
  CHECK(after.dead == 100);
  CHECK(after.total_residual == before.total_residual);
  CHECK(after.packets_cum == before.packets_cum);
}

TEST_CASE("runs are deterministic in the seed") {
  for (auto p : {proto::Protocol::fihr, proto::Protocol::ihr, proto::Protocol::dhr}) {
    const auto cfg = short_config(p, 60);
    const auto a = run_single(cfg, 9);
    const auto b = run_single(cfg, 9);
    CHECK(a.series == b.series);
    const auto c = run_single(cfg, 10);
    CHECK_FALSE(a.series == c.series);
  }
}

TEST_CASE("run seeds are isolated from each other") {
  auto cfg = short_config(proto::Protocol::fihr, 40);
  cfg.runs = 3;
  cfg.seed = 5;
  const auto all = run_simulation(cfg);
  REQUIRE(all.runs.size() == 3);
  CHECK(all.runs[2].series == run_single(cfg, 7).series);
  CHECK(all.runs[2].seed == 7);
}

TEST_CASE("series shape, monotonicity and conservation") {
  for (auto p : {proto::Protocol::fihr, proto::Protocol::ihr, proto::Protocol::dhr}) {
    auto cfg = short_config(p, 400);
    cfg.fault_rate = 0.05;
    const auto run = run_single(cfg, 21);
    REQUIRE(run.series.size() == 401);
    for (std::size_t i = 1; i < run.series.size(); ++i) {
      const auto& prev = run.series[i - 1];
      const auto& cur = run.series[i];
      REQUIRE(cur.round == i);
      REQUIRE(cur.alive + cur.dead == 100);
      REQUIRE(cur.alive <= prev.alive);
      REQUIRE(cur.total_residual <= prev.total_residual);
      REQUIRE(cur.packets_cum >= prev.packets_cum);
      REQUIRE(cur.failovers_cum >= prev.failovers_cum);
    }
    const double drop = run.initial_energy - run.series.back().total_residual;
    CHECK(std::abs(drop - run.charged_energy) <= 1e-9 * run.charged_energy);
  }
}

TEST_CASE("rows after network death repeat the final state") {
  auto cfg = short_config(proto::Protocol::dhr, 3000);
  const auto run = run_single(cfg, 2);
  REQUIRE(run.series.size() == 3001);
  const auto& last = run.series.back();
  CHECK(last.alive == 0);
  std::size_t first_zero = 0;
  while (run.series[first_zero].alive != 0) ++first_zero;
  for (std::size_t i = first_zero; i < run.series.size(); ++i) {
    CHECK(run.series[i].alive == 0);
    CHECK(run.series[i].total_residual == run.series[first_zero].total_residual);
    CHECK(run.series[i].packets_cum == run.series[first_zero].packets_cum);
  }
}

TEST_CASE("averaged result") {
  auto cfg = short_config(proto::Protocol::ihr, 300);
  cfg.runs = 4;
  const auto res = run_simulation(cfg);
  CHECK(res.node_count == 100);
  CHECK(res.data_bits == 32000);
  REQUIRE(res.mean.series.size() == 301);
  double sum = 0;
  for (const auto& r : res.runs) sum += r.series[150].total_residual;
  CHECK(res.mean.series[150].total_residual == doctest::Approx(sum / 4));
  CHECK(res.mean.summary.runs == 4);
}
