#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

#include "osnrecruit/diffusion.hpp"
#include "support.hpp"

using namespace osnrecruit;
using support::ids;

namespace {

// Reachability from the seeds along followee -> follower.
std::vector<NodeIndex> bfs_reachable(const SocialGraph& g, const std::vector<NodeIndex>& seeds) {
  std::vector<char> seen(g.size(), 0);
  std::deque<NodeIndex> queue;
  for (const auto s : seeds) {
    if (!seen[s]) {
      seen[s] = 1;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    const auto v = queue.front();
    queue.pop_front();
    for (const auto f : g.followers(v)) {
      if (!seen[f]) {
        seen[f] = 1;
        queue.push_back(f);
      }
    }
  }
  std::vector<NodeIndex> out;
  for (NodeIndex v = 0; v < g.size(); ++v) {
    if (seen[v]) out.push_back(v);
  }
  return out;
}

DiffusionConfig with_p(double p, std::size_t runs = 100) {
  DiffusionConfig cfg;
  cfg.activation_probability = p;
  cfg.runs = runs;
  return cfg;
}

struct Recorder : CascadeObserver {
  std::set<std::pair<NodeIndex, NodeIndex>> attempts;
  bool repeated = false;
  std::vector<std::size_t> counts;
  void on_attempt(NodeIndex from, NodeIndex to, bool) override {
    if (!attempts.insert({from, to}).second) repeated = true;
  }
  void on_step(std::size_t, std::size_t active) override { counts.push_back(active); }
};

double mean_of(const InfluenceEstimate& e) { return e.mean; }

double standard_error(const InfluenceEstimate& e) {
  const double n = static_cast<double>(e.sizes.size());
  double ss = 0.0;
  for (const auto s : e.sizes) ss += (static_cast<double>(s) - e.mean) * (static_cast<double>(s) - e.mean);
  return std::sqrt(ss / (n - 1) / n);
}

}  // namespace

TEST_SUITE("independent cascade") {
  TEST_CASE("influence flows from followee to follower") {
    const auto g = SocialGraph::build({support::make_node("A", "x", {"sports"}), support::make_node("B", "x", {"sports"})},
                                      {support::follows("B", "A")});
    CHECK(simulate_ic(g, ids({"A"}), with_p(1.0), 1).active.size() == 2);
    CHECK(simulate_ic(g, ids({"B"}), with_p(1.0), 1).active.size() == 1);
  }

  TEST_CASE("p = 1 equals breadth-first reachability") {
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      Rng rng(seed);
      const std::size_t n = 5 + uniform_below(rng, 46);
      const auto g = support::random_graph(n, 0.6 / static_cast<double>(n) * 3.0, seed);
      std::vector<NodeIndex> seeds;
      for (NodeIndex v = 0; v < n; ++v) {
        if (uniform01(rng) < 0.1) seeds.push_back(v);
      }
      if (seeds.empty()) seeds.push_back(0);
      const auto out = simulate_ic(g, seeds, with_p(1.0), seed);
      CHECK(out.active == bfs_reachable(g, seeds));
      const auto est = estimate_influence(g, seeds, with_p(1.0, 20), seed);
      for (const auto s : est.sizes) CHECK(s == out.active.size());
    }
  }

  TEST_CASE("p = 0 returns the seeds in zero steps") {
    const auto g = support::random_graph(30, 0.2, 4);
    const std::vector<NodeIndex> seeds{7, 3, 19};
    const auto out = simulate_ic(g, seeds, with_p(0.0), 9);
    CHECK(out.active == std::vector<NodeIndex>{3, 7, 19});
    CHECK(out.steps == 0);
    const auto est = estimate_influence(g, seeds, with_p(0.0, 50), 9);
    CHECK(est.mean == 3.0);
    CHECK(std::all_of(est.sizes.begin(), est.sizes.end(), [](std::size_t s) { return s == 3; }));
  }

  TEST_CASE("every node seeded") {
    const auto g = support::random_graph(20, 0.1, 2);
    std::vector<NodeIndex> all(g.size());
    for (NodeIndex v = 0; v < g.size(); ++v) all[v] = v;
    CHECK(simulate_ic(g, all, with_p(0.3), 1).active == all);
  }

  TEST_CASE("two-node analytic mean") {
    const auto g = SocialGraph::build({support::make_node("A", "x", {"sports"}), support::make_node("B", "x", {"sports"})},
                                      {support::follows("B", "A")});
    const auto est = estimate_influence(g, ids({"A"}), with_p(0.02, 100000), 2024);
    CHECK(est.mean >= 1.015);
    CHECK(est.mean <= 1.025);
  }

  TEST_CASE("reproducible per seed") {
    const auto g = support::random_graph(60, 0.08, 5);
    const std::vector<NodeIndex> seeds{0, 1};
    CHECK(simulate_ic(g, seeds, with_p(0.3), 77).active == simulate_ic(g, seeds, with_p(0.3), 77).active);
    CHECK(estimate_influence(g, seeds, with_p(0.3, 30), 1).sizes == estimate_influence(g, seeds, with_p(0.3, 30), 1).sizes);
  }

  TEST_CASE("monotone in the seed set and in p") {
    const auto g = support::random_graph(40, 0.08, 11);
    const std::vector<NodeIndex> small{0, 1};
    const std::vector<NodeIndex> large{0, 1, 2, 3, 4};
    const auto a = estimate_influence(g, small, with_p(0.2, 1000), 3);
    const auto b = estimate_influence(g, large, with_p(0.2, 1000), 4);
    CHECK(mean_of(a) <= mean_of(b) + 3.0 * std::hypot(standard_error(a), standard_error(b)));
    const auto lo = estimate_influence(g, small, with_p(0.01, 1000), 5);
    const auto hi = estimate_influence(g, small, with_p(0.05, 1000), 6);
    CHECK(mean_of(lo) <= mean_of(hi) + 3.0 * std::hypot(standard_error(lo), standard_error(hi)));
  }

  TEST_CASE("progressive with one attempt per edge") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const auto g = support::random_graph(40, 0.1, seed);
      Recorder rec;
      const std::vector<NodeIndex> seeds{0};
      const auto out = simulate_ic(g, seeds, with_p(0.3), seed, &rec);
      CHECK_FALSE(rec.repeated);
      CHECK(std::is_sorted(rec.counts.begin(), rec.counts.end()));
      CHECK(rec.counts.back() == out.active.size());
      CHECK(rec.counts.size() == out.steps + 1);
      for (const auto& [from, to] : rec.attempts) {
        const auto f = g.followers(from);
        CHECK(std::find(f.begin(), f.end(), to) != f.end());
      }
    }
  }

  TEST_CASE("per-edge probabilities when enabled") {
    std::vector<FollowEdge> edges{support::follows("B", "A")};
    edges[0].probability = 1.0;
    const auto g = SocialGraph::build({support::make_node("A", "x", {"sports"}), support::make_node("B", "x", {"sports"})},
                                      std::move(edges));
    auto cfg = with_p(0.0);
    CHECK(simulate_ic(g, ids({"A"}), cfg, 1).active.size() == 1);
    cfg.use_edge_probabilities = true;
    CHECK(simulate_ic(g, ids({"A"}), cfg, 1).active.size() == 2);
  }

  TEST_CASE("invalid inputs") {
    const auto g = support::random_graph(5, 0.2, 1);
    const std::vector<NodeIndex> bad{9};
    CHECK_THROWS_AS(simulate_ic(g, bad, with_p(0.5), 1), std::invalid_argument);
    CHECK_THROWS_AS(with_p(1.5).validate(), std::invalid_argument);
    CHECK_THROWS_AS(with_p(0.5, 0).validate(), std::invalid_argument);
  }
}

TEST_SUITE("interested influence") {
  TEST_CASE("counts active nodes holding a portfolio interest") {
    const auto g = SocialGraph::build(
        {support::make_node("1", "x", {"sports"}), support::make_node("2", "x", {"music"}),
         support::make_node("3", "x", {"books", "sports"}), support::make_node("4", "x", {"books"}),
         support::make_node("5", "x", {"art"}), support::make_node("6", "x", {"music", "art"}),
         support::make_node("7", "x", {"books"})},
        {});
    const auto all = ids({"1", "2", "3", "4", "5", "6", "7"});
    CHECK(interested_influence(g, all, support::portfolio_of({"sports", "music"})) == 4);
    CHECK(interested_influence(g, all, support::portfolio_of({"sports", "film"})) == 2);
    CHECK(interested_influence(g, all, support::portfolio_of({"film"})) == 0);
    CHECK(interested_influence(g, ids({"1", "3"}), support::portfolio_of({"sports"})) == 2);
    CHECK(interested_influence(g, ids({"1", "2", "3", "4", "5", "6", "7"}), support::portfolio_of({"music", "art"})) == 3);
  }
}
