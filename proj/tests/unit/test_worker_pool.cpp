#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "osnrecruit/geo.hpp"
#include "osnrecruit/node_id.hpp"
#include "osnrecruit/seeding.hpp"
#include "osnrecruit/worker_pool.hpp"
#include "support.hpp"

using namespace osnrecruit;

namespace {

AttributeModel two_area_model() {
  AttributeModel m;
  m.geometry["north"] = {{51.52, -0.10}, 4.0};
  m.geometry["south"] = {{51.47, -0.14}, 8.0};
  return m;
}

std::vector<NodeIndex> first_n(std::size_t n) {
  std::vector<NodeIndex> out(n);
  for (NodeIndex v = 0; v < n; ++v) out[v] = v;
  return out;
}

}  // namespace

TEST_SUITE("geo") {
  TEST_CASE("haversine distances") {
    CHECK(haversine_km({51.5, -0.12}, {51.5, -0.12}) == 0.0);
    // One degree of latitude on the mean-radius sphere.
    CHECK(std::abs(haversine_km({0, 0}, {1, 0}) - kEarthRadiusKm * M_PI / 180.0) < 1e-9);
    CHECK(std::abs(haversine_km({0, 0}, {0, 180}) - kEarthRadiusKm * M_PI) < 1e-6);
    CHECK(haversine_km({51.5, -0.1}, {48.85, 2.35}) == doctest::Approx(haversine_km({48.85, 2.35}, {51.5, -0.1})));
  }

  TEST_CASE("destination point travels the requested distance") {
    for (const double d : {0.0, 0.5, 3.0, 10.0, 120.0}) {
      for (const double b : {0.0, 1.0, 2.5, 4.0, 6.0}) {
        const LatLon o{53.41, -2.98};
        CHECK(std::abs(haversine_km(o, destination_point(o, b, d)) - d) < 1e-6);
      }
    }
  }
}

TEST_SUITE("seeding") {
  TEST_CASE("derived seeds are stable and key-sensitive") {
    static_assert(derive_seed(1, {2, 3}) == derive_seed(1, {2, 3}));
    CHECK(derive_seed(1, {2, 3}) != derive_seed(1, {3, 2}));
    CHECK(derive_seed(1, {2}) != derive_seed(2, {2}));
    CHECK(derive_seed(1, {}) != derive_seed(1, {0}));
    CHECK(label_key("ga") != label_key("ag"));
    CHECK(real_key(0.5) != real_key(0.25));
  }

  TEST_CASE("uniform helpers") {
    Rng rng(42);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 2000; ++i) {
      const double u = uniform01(rng);
      CHECK(u >= 0.0);
      CHECK(u < 1.0);
      const auto k = uniform_below(rng, 7);
      CHECK(k < 7);
      seen.insert(k);
    }
    CHECK(seen.size() == 7);
    Rng a(5);
    Rng b(5);
    CHECK(uniform01(a) == uniform01(b));
  }
}

TEST_SUITE("node ids") {
  TEST_CASE("natural ordering") {
    CHECK(NodeId("2") < NodeId("10"));
    CHECK(NodeId("10") < NodeId("A"));
    CHECK(NodeId("A") < NodeId("B"));
    CHECK(NodeId("B10") < NodeId("B2"));
    CHECK(NodeId("7") == NodeId("7"));
    std::vector<NodeId> v{NodeId("b"), NodeId("11"), NodeId("3"), NodeId("a")};
    std::sort(v.begin(), v.end());
    CHECK(v == std::vector<NodeId>{NodeId("3"), NodeId("11"), NodeId("a"), NodeId("b")});
  }
}

TEST_SUITE("distributions") {
  TEST_CASE("bounds and sampling ranges") {
    Rng rng(1);
    const auto u = Distribution::uniform(10, 50);
    const auto e = Distribution::exponential(3);
    for (int i = 0; i < 1000; ++i) {
      const double x = u.sample(rng);
      CHECK(x >= 10.0);
      CHECK(x <= 50.0);
      CHECK(e.sample(rng) >= 0.0);
    }
    CHECK(Distribution::constant(0.5).sample(rng) == 0.5);
    CHECK(e.lower_bound() == 0.0);
    CHECK(std::isinf(e.upper_bound()));
    CHECK(Distribution::empirical({3, 1, 2}).lower_bound() == 1.0);
    CHECK(Distribution::empirical({3, 1, 2}).upper_bound() == 3.0);
  }

  TEST_CASE("invalid parameters") {
    CHECK_THROWS_AS(Distribution::uniform(2, 1), std::invalid_argument);
    CHECK_THROWS_AS(Distribution::exponential(0), std::invalid_argument);
    CHECK_THROWS_AS(Distribution::empirical({}), std::invalid_argument);
    CHECK_THROWS_AS(Distribution::constant(NAN), std::invalid_argument);
  }
}

TEST_SUITE("worker registration") {
  TEST_CASE("empty active set gives an empty pool") {
    const auto g = support::random_graph(10, 0.1, 1);
    CHECK(register_workers(g, {}, two_area_model(), 1).empty());
  }

  TEST_CASE("constant distributions are copied onto every worker") {
    const auto g = support::random_graph(30, 0.1, 2);
    auto m = two_area_model();
    m.speed_kmh = Distribution::constant(30);
    m.residual_energy = Distribution::constant(0.7);
    m.reputation = Distribution::constant(0.5);
    const auto pool = register_workers(g, first_n(30), m, 3);
    CHECK(pool.size() == 30);
    for (const auto& w : pool.workers()) {
      CHECK(w.avg_speed_kmh == 30.0);
      CHECK(w.residual_energy == 0.7);
      CHECK(w.reputation == 0.5);
    }
  }

  TEST_CASE("attribute ranges, GPS containment and order independence") {
    const auto g = support::random_graph(300, 0.01, 4);
    const auto m = two_area_model();
    auto active = first_n(300);
    const auto pool = register_workers(g, active, m, 9);
    CHECK(pool.size() == 300);
    for (std::size_t i = 0; i < pool.size(); ++i) {
      const auto& w = pool[i];
      CHECK(w.node == i);
      CHECK(w.id == g.node(w.node).id);
      const auto& geo = m.geometry.at(g.node(w.node).general_location);
      CHECK(haversine_km(geo.center, w.gps) <= geo.radius_km + 1e-9);
      CHECK(w.residual_energy >= 0.0);
      CHECK(w.residual_energy <= 1.0);
      CHECK(w.avg_speed_kmh > 0.0);
      CHECK(w.reputation == 0.5);
    }
    std::reverse(active.begin(), active.end());
    const auto again = register_workers(g, active, m, 9);
    for (std::size_t i = 0; i < pool.size(); ++i) {
      CHECK(again[i].gps.lat == pool[i].gps.lat);
      CHECK(again[i].gps.lon == pool[i].gps.lon);
      CHECK(again[i].residual_energy == pool[i].residual_energy);
      CHECK(again[i].avg_speed_kmh == pool[i].avg_speed_kmh);
    }
    // A worker's attributes do not depend on who else registered.
    const std::vector<NodeIndex> one{17};
    const auto solo = register_workers(g, one, m, 9);
    CHECK(solo[0].residual_energy == pool[17].residual_energy);
  }

  TEST_CASE("uniform energy mean") {
    const auto g = support::random_graph(10000, 0.0, 5);
    const auto pool = register_workers(g, first_n(10000), two_area_model(), 6);
    double sum = 0.0;
    for (const auto& w : pool.workers()) sum += w.residual_energy;
    const double mean = sum / 10000.0;
    CHECK(mean >= 0.48);
    CHECK(mean <= 0.52);
  }

  TEST_CASE("missing geometry and invalid models") {
    const auto g = support::random_graph(10, 0.1, 1);
    AttributeModel m;
    m.geometry["north"] = {{51.5, -0.1}, 3.0};
    const auto active = first_n(10);
    CHECK_THROWS_AS(register_workers(g, active, m, 1), std::invalid_argument);
    auto bad = two_area_model();
    bad.reputation = Distribution::uniform(0.5, 1.5);
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = two_area_model();
    bad.speed_kmh = Distribution::uniform(0.0, 10.0);
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  }

  TEST_CASE("subset keeps NodeId order") {
    const auto g = support::random_graph(20, 0.1, 8);
    const auto pool = register_workers(g, first_n(20), two_area_model(), 2);
    const std::vector<std::size_t> pick{9, 2, 15};
    const auto sub = pool.subset(pick);
    CHECK(sub.size() == 3);
    CHECK(sub[0].node == 2);
    CHECK(sub[1].node == 9);
    CHECK(sub[2].node == 15);
    CHECK(pool.find(15) != nullptr);
    CHECK(sub.find(3) == nullptr);
  }
}

TEST_SUITE("attribute tables") {
  TEST_CASE("single row table always yields that row") {
    std::istringstream in("speed_kmh,reputation\n25,0.8\n");
    const auto t = parse_attribute_table(in);
    Rng rng(3);
    for (int i = 0; i < 20; ++i) {
      CHECK(t.distribution("speed_kmh").sample(rng) == 25.0);
      CHECK(t.distribution("reputation").sample(rng) == 0.8);
    }
  }

  TEST_CASE("empirical speeds average to the table mean") {
    std::istringstream in("user,speed_kmh\nu1,10\nu2,20\nu3,30\n");
    const auto d = parse_attribute_table(in).distribution("speed_kmh");
    Rng rng(11);
    double sum = 0.0;
    for (int i = 0; i < 10000; ++i) sum += d.sample(rng);
    CHECK(sum / 10000.0 >= 19.5);
    CHECK(sum / 10000.0 <= 20.5);
  }

  TEST_CASE("errors name the offending line") {
    std::istringstream bad_rep("speed_kmh,reputation\n20,0.5\n30,1.2\n");
    try {
      parse_attribute_table(bad_rep);
      FAIL("expected a range error");
    } catch (const TableError& e) {
      CHECK(e.line() == 3);
    }
    std::istringstream bad_speed("speed_kmh\n-4\n");
    CHECK_THROWS_AS(parse_attribute_table(bad_speed), TableError);
    std::istringstream no_cols("a,b\n1,2\n");
    CHECK_THROWS_AS(parse_attribute_table(no_cols), TableError);
    std::istringstream ragged("speed_kmh,reputation\n20\n");
    CHECK_THROWS_AS(parse_attribute_table(ragged), TableError);
    std::istringstream only_speed("speed_kmh\n20\n");
    CHECK_THROWS_AS(parse_attribute_table(only_speed).distribution("reputation"), TableError);
    CHECK_THROWS_AS(load_attribute_table("/nonexistent/table.csv"), TableError);
  }
}
