#include <doctest.h>

#include <cmath>

#include "fihr/network.hpp"

using namespace fihr::net;

TEST_CASE("distance") {
  CHECK(distance({0, 0}, {3, 4}) == 5.0);
  CHECK(distance({7.5, -2}, {7.5, -2}) == 0.0);
  CHECK(distance({50, 50}, {0, 0}) == doctest::Approx(70.7107).epsilon(1e-6));
}

TEST_CASE("deployment") {
  FieldConfig cfg;  // 100 nodes, 100 x 100, 3 J

  SUBCASE("positions inside the field, fresh state") {
    for (std::uint64_t seed : {1u, 2u, 99u}) {
      const auto net = deploy(cfg, seed);
      REQUIRE(net.size() == 100);
      for (const auto& n : net.nodes()) {
        CHECK(n.position.x >= 0);
        CHECK(n.position.x <= 100);
        CHECK(n.position.y >= 0);
        CHECK(n.position.y <= 100);
        CHECK(n.alive());
        CHECK(n.residual_energy == 3.0);
        CHECK(n.role == Role::nch);
      }
      CHECK(net.total_residual() == 300.0);
    }
  }
  SUBCASE("same seed, same layout; different seed, different layout") {
    const auto a = deploy(cfg, 42), b = deploy(cfg, 42), c = deploy(cfg, 43);
    bool differs = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a.nodes()[i].position == b.nodes()[i].position);
      differs |= !(a.nodes()[i].position == c.nodes()[i].position);
    }
    CHECK(differs);
  }
  SUBCASE("scenario 2 holds 600 J") {
    FieldConfig big;
    big.width = big.height = 200;
    big.bs_position = {100, 100};
    big.node_count = 200;
    CHECK(deploy(big, 3).total_residual() == 600.0);
    CHECK(big.max_bs_distance() == doctest::Approx(std::hypot(100.0, 100.0)));
  }
}

TEST_CASE("field validation names the field") {
  FieldConfig cfg;
  cfg.initial_energy = -1;
  CHECK_THROWS_WITH(cfg.validate(), doctest::Contains("field.initial_energy"));
  cfg = {};
  cfg.bs_position = {150, 50};
  CHECK_THROWS_WITH(cfg.validate(), doctest::Contains("field.bs_x"));
  cfg = {};
  cfg.node_count = 0;
  CHECK_THROWS_WITH(cfg.validate(), doctest::Contains("field.node_count"));
}

TEST_CASE("alive count and death semantics") {
  auto net = deploy(FieldConfig{}, 1);
  EnergyLedger ledger(net.size());
  CHECK(alive_count(net.nodes()) == 100);

  for (NodeId id : {3u, 50u, 99u}) net.mark_fault(id);
  CHECK(alive_count(net.nodes()) == 97);
  CHECK(net.node(3).status == NodeStatus::fault_dead);

  SUBCASE("dead nodes cannot act") {
    CHECK_FALSE(net.spend(3, 0.1, ledger));
    CHECK(ledger.total() == 0.0);
    CHECK(net.node(3).residual_energy == 3.0);
    CHECK_THROWS(net.set_role(3, Role::pch));
  }
  SUBCASE("unaffordable action empties the node, no partial action") {
    CHECK(net.spend(0, 1.0, ledger));
    CHECK(net.node(0).residual_energy == 2.0);
    net.set_role(0, Role::pch);
    CHECK_FALSE(net.spend(0, 2.5, ledger));
    CHECK(net.node(0).residual_energy == 0.0);
    CHECK(net.node(0).status == NodeStatus::energy_dead);
    CHECK(net.node(0).role == Role::nch);
    CHECK(ledger.total() == 3.0);
    CHECK(ledger.per_node()[0] == 3.0);
  }
  SUBCASE("spending to exactly zero completes and then dies") {
    CHECK(net.spend(1, 3.0, ledger));
    CHECK_FALSE(net.node(1).alive());
  }
  SUBCASE("all dead") {
    for (NodeId i = 0; i < net.size(); ++i) net.mark_fault(i);
    CHECK(alive_count(net.nodes()) == 0);
  }
}
