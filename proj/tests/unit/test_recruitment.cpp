#include <doctest.h>

#include <cmath>
#include <set>

#include "osnrecruit/geo.hpp"
#include "osnrecruit/recruitment.hpp"
#include "support.hpp"

using namespace osnrecruit;
using support::make_node;

namespace {

const LatLon kTaskAt{51.5, -0.12};

Worker worker_at(const char* name, const SocialGraph& g, double km_from_task, double speed, double re = 1.0,
                 double rep = 1.0) {
  Worker w;
  w.node = g.index_of(NodeId(name));
  w.id = g.node(w.node).id;
  w.gps = destination_point(kTaskAt, 0.7, km_from_task);
  w.avg_speed_kmh = speed;
  w.residual_energy = re;
  w.reputation = rep;
  return w;
}

// W1: 10 posts, 10 interested followees. W2: 5 posts, 7. W3: none. M: music only.
SocialGraph interest_fixture() {
  std::vector<SocialNode> nodes{make_node("W1", "x", {"sports"}, {{"sports", 10}}),
                                make_node("W2", "x", {"sports"}, {{"sports", 5}}),
                                make_node("W3", "x", {"sports"}, {}), make_node("M", "x", {"music"}, {{"music", 50}})};
  std::vector<FollowEdge> edges;
  for (int i = 0; i < 10; ++i) {
    const std::string f = "f" + std::to_string(i);
    nodes.push_back(make_node(f, "x", {"sports"}));
    edges.push_back(support::follows("W1", f));
    if (i < 7) edges.push_back(support::follows("W2", f));
    edges.push_back(support::follows("M", f));
  }
  return SocialGraph::build(std::move(nodes), std::move(edges));
}

const Worker& in_pool(const WorkerPool& pool, const char* name) {
  return *pool.find(pool.graph().index_of(NodeId(name)));
}

std::vector<Candidate> candidates_with(const std::vector<double>& qos) {
  std::vector<Candidate> out;
  for (std::size_t i = 0; i < qos.size(); ++i) {
    out.push_back({static_cast<NodeIndex>(i), NodeId(std::to_string(i)), qos[i]});
  }
  return out;
}

WorkerPool random_pool(const SocialGraph& g, std::uint64_t seed) {
  AttributeModel m;
  m.geometry["north"] = {{51.52, -0.10}, 6.0};
  m.geometry["south"] = {{51.47, -0.14}, 6.0};
  std::vector<NodeIndex> all(g.size());
  for (NodeIndex v = 0; v < g.size(); ++v) all[v] = v;
  return register_workers(g, all, m, seed);
}

}  // namespace

TEST_SUITE("recruitment scores") {
  TEST_CASE("travel time") {
    const auto g = interest_fixture();
    const auto t = support::task_for("sports", kTaskAt);
    CHECK(travel_time(worker_at("W1", g, 0.0, 30), t) == 0.0);
    CHECK(std::abs(travel_time(worker_at("W1", g, 10.0, 60), t) - 10.0) < 1e-9);
    CHECK(std::abs(travel_time(worker_at("W1", g, 10.0, 20), t) - 30.0) < 1e-9);
  }

  TEST_CASE("tau") {
    CHECK(tau(60, 60) == 0.0);
    CHECK(tau(1, 60) == 1.0);
    CHECK(tau(1, 1.5) == 1.0);
    CHECK(std::abs(tau(std::sqrt(60.0), 60) - 0.5) < 1e-9);
    CHECK(tau(0, 30) == 1.0);
    CHECK(tau(0.5, 30) == 1.0);
    CHECK(tau(200, 60) == 0.0);
    CHECK_THROWS_AS(tau(5, 1.0), std::invalid_argument);
  }

  TEST_CASE("tau is non-increasing in travel time and zero past the constraint") {
    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
      const double tc = 1.5 + 200.0 * uniform01(rng);
      double prev = 1.0;
      for (double tr = 0.0; tr <= 2.0 * tc; tr += tc / 37.0) {
        const double v = tau(tr, tc);
        CHECK(v <= prev);
        CHECK(v >= 0.0);
        if (tr >= tc) CHECK(v == 0.0);
        prev = v;
      }
    }
  }

  TEST_CASE("qos composition") {
    CHECK(qos_from_components(1, 1, 1, 1) == 1.0);
    CHECK(std::abs(qos_from_components(0.5, 0.5, 0.5, 0.5) - 0.5) < 1e-9);
    CHECK(std::abs(qos_from_components(0.8, 0.6, 1.0, 0.9) - std::pow(0.432, 0.25)) < 1e-9);
    CHECK(std::abs(qos_from_components(0.8, 0.6, 1.0, 0.9) - 0.8107) < 1e-4);
  }

  TEST_CASE("qos is zero iff a component is zero and monotone in each") {
    Rng rng(9);
    for (int i = 0; i < 500; ++i) {
      double c[4];
      for (auto& x : c) x = uniform01(rng) < 0.1 ? 0.0 : uniform01(rng);
      const double q = qos_from_components(c[0], c[1], c[2], c[3]);
      const bool any_zero = c[0] == 0 || c[1] == 0 || c[2] == 0 || c[3] == 0;
      CHECK((q == 0.0) == any_zero);
      for (int k = 0; k < 4; ++k) {
        double d[4] = {c[0], c[1], c[2], c[3]};
        d[k] = std::min(1.0, d[k] + 0.1);
        CHECK(qos_from_components(d[0], d[1], d[2], d[3]) >= q);
      }
    }
  }

  TEST_CASE("interest level") {
    const auto g = interest_fixture();
    const auto t = support::task_for("sports", kTaskAt);
    const WorkerPool pool(g, {worker_at("W1", g, 1, 30), worker_at("W2", g, 1, 30), worker_at("W3", g, 1, 30),
                              worker_at("M", g, 1, 30)});
    const auto norm = interest_normalizer(pool, t);
    CHECK(norm.max_posts == 10.0);
    CHECK(norm.max_interested_followees == 10.0);
    const auto& m = in_pool(pool, "M");
    CHECK(std::abs(interest_level(in_pool(pool, "W1"), t, pool) - 1.0) < 1e-12);
    CHECK(std::abs(interest_level(in_pool(pool, "W2"), t, pool) - 0.6) < 1e-12);
    CHECK(interest_level(in_pool(pool, "W3"), t, pool) == 0.0);
    // M has 50 music posts and follows 10 sports nodes, yet lacks the domain.
    CHECK(std::abs(interest_level(m, t, pool) - 0.5) < 1e-12);
    CHECK(domain_posts(pool, m, t) == 0.0);
    CHECK(interested_followees(pool, m, t) == 10);
  }

  TEST_CASE("qos of a worker from its attributes") {
    const auto g = interest_fixture();
    const auto t = support::task_for("sports", kTaskAt, 60);
    const WorkerPool pool(g, {worker_at("W1", g, 0.0, 30, 0.8, 0.9), worker_at("W2", g, 0.0, 30, 1.0, 1.0)});
    CHECK(std::abs(qos(in_pool(pool, "W1"), t, pool) - std::pow(0.8 * 1.0 * 1.0 * 0.9, 0.25)) < 1e-9);
    CHECK(std::abs(qos(in_pool(pool, "W2"), t, pool) - std::pow(0.6, 0.25)) < 1e-9);
  }
}

TEST_SUITE("eligibility") {
  TEST_CASE("the four conditions") {
    const auto g = interest_fixture();
    const auto t = support::task_for("sports", kTaskAt, 60, 0.3);
    auto slow = worker_at("W2", g, 10.0, 10);
    slow.avg_speed_kmh = haversine_km(slow.gps, kTaskAt);  // exactly one hour away
    const WorkerPool pool(g, {worker_at("W1", g, 2.0, 30), slow, worker_at("M", g, 0.0, 30),
                              worker_at("f0", g, 0.0, 30, 1.0, 0.2)});
    const auto& w1 = in_pool(pool, "W1");
    const auto& w2 = in_pool(pool, "W2");
    CHECK(eligible(w1, t, pool, 0.1));
    // Exactly at the time constraint: tau = 0, qos = 0.
    CHECK(travel_time(w2, t) == 60.0);
    CHECK(qos(w2, t, pool) == 0.0);
    CHECK_FALSE(eligible(w2, t, pool, 0.1));
    CHECK_FALSE(eligible(in_pool(pool, "M"), t, pool, 0.0));   // no domain match
    CHECK_FALSE(eligible(in_pool(pool, "f0"), t, pool, 0.0));  // reputation below the task minimum
  }

  TEST_CASE("assessments agree with the single-worker functions") {
    const auto g = support::random_graph(60, 0.1, 4);
    const auto pool = random_pool(g, 5);
    const auto t = support::task_for("music", {51.5, -0.12}, 45, 0.2);
    const auto a = assess_pool(pool, t, 0.15);
    REQUIRE(a.size() == pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i) {
      CHECK(a[i].position == i);
      CHECK(std::abs(a[i].qos - qos(pool[i], t, pool)) < 1e-12);
      CHECK(a[i].eligible == eligible(pool[i], t, pool, 0.15));
      CHECK(a[i].interest_level >= 0.0);
      CHECK(a[i].interest_level <= 1.0);
    }
  }
}

TEST_SUITE("offers") {
  TEST_CASE("hand-traced substitution") {
    const auto ranked = candidates_with({0.9, 0.8, 0.7, 0.6, 0.5});
    const auto r = run_offers(ranked, 2, true, scripted_acceptance({false, true, false, true}));
    REQUIRE(r.slots.size() == 2);
    REQUIRE(r.slots[0]);
    REQUIRE(r.slots[1]);
    CHECK(r.slots[0]->qos == 0.6);
    CHECK(r.slots[1]->qos == 0.8);
    CHECK(r.substitutions == 2);
    CHECK(r.offers == 4);
    CHECK(std::abs(r.average_qos - 0.7) < 1e-12);
  }

  TEST_CASE("without substitution refused slots stay empty") {
    const auto ranked = candidates_with({0.9, 0.8, 0.7, 0.6, 0.5});
    const auto r = run_offers(ranked, 2, false, scripted_acceptance({false, true}));
    CHECK_FALSE(r.slots[0]);
    CHECK(r.slots[1]->qos == 0.8);
    CHECK(r.substitutions == 0);
    CHECK(std::abs(r.average_qos - 0.4) < 1e-12);
  }

  TEST_CASE("acceptance one equals the static top selection") {
    const auto ranked = candidates_with({0.9, 0.8, 0.7, 0.6, 0.5});
    const auto dyn = run_offers(ranked, 3, true, seeded_acceptance(1.0, 4));
    const auto stat = run_offers(ranked, 3, false, seeded_acceptance(1.0, 4));
    for (std::size_t i = 0; i < 3; ++i) {
      REQUIRE(dyn.slots[i]);
      CHECK(dyn.slots[i]->node == stat.slots[i]->node);
      CHECK(dyn.slots[i]->qos == ranked[i].qos);
    }
    CHECK(dyn.substitutions == 0);
  }

  TEST_CASE("acceptance zero fills nothing") {
    const auto ranked = candidates_with({0.9, 0.8, 0.7, 0.6, 0.5});
    for (const bool sub : {true, false}) {
      const auto r = run_offers(ranked, 2, sub, seeded_acceptance(0.0, 4));
      CHECK(r.average_qos == 0.0);
      CHECK(r.substitutions == 0);
      CHECK(r.offers == (sub ? 5u : 2u));
      for (const auto& s : r.slots) CHECK_FALSE(s);
    }
  }

  TEST_CASE("short lists leave slots empty") {
    const auto r = run_offers(candidates_with({0.9}), 3, true, seeded_acceptance(1.0, 1));
    CHECK(r.slots[0]);
    CHECK_FALSE(r.slots[1]);
    CHECK(std::abs(r.average_qos - 0.3) < 1e-12);
    CHECK(run_offers({}, 2, true, seeded_acceptance(1.0, 1)).average_qos == 0.0);
    CHECK_THROWS_AS(run_offers({}, 0, true, seeded_acceptance(1.0, 1)), std::invalid_argument);
  }

  TEST_CASE("script exhaustion is an error") {
    CHECK_THROWS_AS(run_offers(candidates_with({0.9, 0.8, 0.7}), 2, true, scripted_acceptance({false})),
                    std::out_of_range);
  }

  TEST_CASE("seeded acceptance is keyed by worker and seed") {
    const auto d = seeded_acceptance(0.5, 99);
    const Candidate c{7, NodeId("7"), 0.5};
    const bool first = d(c);
    for (int i = 0; i < 5; ++i) CHECK(d(c) == first);
    int yes = 0;
    for (NodeIndex v = 0; v < 4000; ++v) yes += d({v, NodeId(std::to_string(v)), 0.1});
    CHECK(yes > 1800);
    CHECK(yes < 2200);
    CHECK_THROWS_AS(seeded_acceptance(1.5, 1), std::invalid_argument);
  }
}

TEST_SUITE("recruitment rounds") {
  TEST_CASE("dynamic never loses to static, filled slots are eligible") {
    const auto g = support::random_graph(80, 0.1, 21);
    for (std::uint64_t trial = 0; trial < 1000; ++trial) {
      const auto pool = random_pool(g, trial % 10);
      Rng rng(trial);
      const char* domains[] = {"sports", "music", "books"};
      const auto t = support::task_for(domains[trial % 3], {51.5, -0.12}, 20.0 + 40.0 * uniform01(rng), 0.0);
      RecruitConfig cfg;
      cfg.group_size = 1 + uniform_below(rng, 8);
      cfg.qos_min = 0.2 * uniform01(rng);
      cfg.acceptance_probability = uniform01(rng);
      cfg.mode = RecruitMode::GRS;
      const auto stat = recruit_dynamic(pool, t, cfg, trial);
      cfg.mode = RecruitMode::DGRS;
      const auto dyn = recruit_dynamic(pool, t, cfg, trial);
      CHECK(dyn.average_qos >= stat.average_qos);
      for (std::size_t i = 0; i < stat.slots.size(); ++i) {
        if (stat.slots[i]) CHECK(dyn.slots[i]);
      }
      for (const auto& s : dyn.slots) {
        if (!s) continue;
        const auto* w = pool.find(s->node);
        REQUIRE(w != nullptr);
        CHECK(eligible(*w, t, pool, cfg.qos_min));
      }
    }
  }

  TEST_CASE("acceptance one and zero through the pool") {
    const auto g = support::random_graph(80, 0.1, 22);
    const auto pool = random_pool(g, 1);
    const auto t = support::task_for("sports", {51.5, -0.12}, 60, 0.0);
    RecruitConfig cfg;
    cfg.group_size = 5;
    const auto ranked = rank_candidates(pool, t, cfg);
    REQUIRE(ranked.size() >= 5);
    cfg.acceptance_probability = 1.0;
    const auto r = recruit_dynamic(pool, t, cfg, 3);
    for (std::size_t i = 0; i < 5; ++i) CHECK(r.slots[i]->node == ranked[i].node);
    CHECK(r.substitutions == 0);
    cfg.acceptance_probability = 0.0;
    for (const auto mode : kAllModes) {
      cfg.mode = mode;
      const auto z = recruit_dynamic(pool, t, cfg, 3);
      CHECK(z.average_qos == 0.0);
      CHECK(z.substitutions == 0);
    }
  }

  TEST_CASE("ranking is by qos with ties broken by node") {
    const auto g = support::random_graph(80, 0.1, 23);
    const auto pool = random_pool(g, 2);
    const auto t = support::task_for("books", {51.5, -0.12}, 60, 0.0);
    RecruitConfig cfg;
    const auto ranked = rank_candidates(pool, t, cfg);
    for (std::size_t i = 1; i < ranked.size(); ++i) {
      CHECK((ranked[i - 1].qos > ranked[i].qos ||
             (ranked[i - 1].qos == ranked[i].qos && ranked[i - 1].node < ranked[i].node)));
    }
  }
}

TEST_SUITE("mode pools") {
  TEST_CASE("mode names") {
    for (const auto m : kAllModes) CHECK(parse_mode(to_string(m)) == m);
    CHECK_THROWS_AS(parse_mode("XYZ"), std::invalid_argument);
    CHECK(substitutes_refusals(RecruitMode::IIWRS));
    CHECK_FALSE(substitutes_refusals(RecruitMode::GRS));
    CHECK(substitutes_refusals(RecruitMode::DSWRS));
    CHECK(ranks_by_in_degree(RecruitMode::SWRS));
    CHECK_FALSE(ranks_by_in_degree(RecruitMode::DGRS));
  }

  TEST_CASE("pool per mode") {
    const auto g = support::random_graph(50, 0.1, 31);
    const auto full = random_pool(g, 1);
    std::vector<std::size_t> half;
    for (std::size_t i = 0; i < full.size(); i += 2) half.push_back(i);
    const auto greedy = full.subset(half);
    RecruitConfig cfg;
    cfg.mode = RecruitMode::IIWRS;
    CHECK(build_mode_pool(full, greedy, cfg, 1).size() == full.size());
    cfg.mode = RecruitMode::SWRS;
    CHECK(build_mode_pool(full, greedy, cfg, 1).size() == greedy.size());
    cfg.mode = RecruitMode::GRS;
    cfg.grs_pool_size = full.size();
    const auto all = build_mode_pool(full, greedy, cfg, 1);
    REQUIRE(all.size() == full.size());
    for (std::size_t i = 0; i < all.size(); ++i) CHECK(all[i].node == full[i].node);
    cfg.mode = RecruitMode::DGRS;
    cfg.grs_pool_size = 12;
    const auto sample = build_mode_pool(full, greedy, cfg, 7);
    CHECK(sample.size() == 12);
    std::set<NodeIndex> distinct;
    for (const auto& w : sample.workers()) {
      distinct.insert(w.node);
      CHECK(full.find(w.node) != nullptr);
    }
    CHECK(distinct.size() == 12);
    const auto again = build_mode_pool(full, greedy, cfg, 7);
    for (std::size_t i = 0; i < 12; ++i) CHECK(again[i].node == sample[i].node);
    cfg.grs_pool_size = full.size() + 1;
    CHECK_THROWS_AS(build_mode_pool(full, greedy, cfg, 1), std::invalid_argument);
  }

  TEST_CASE("in-degree ranking ignores the recruitment attributes") {
    const auto g = support::counterexample_graph();
    const auto t = support::task_for("sports", kTaskAt, 60, 0.0);
    // A has the most followers but the weakest attributes.
    const std::vector<std::pair<const char*, double>> attrs{{"A", 0.05}, {"B", 0.6}, {"C", 0.9}, {"D", 1.0}};
    for (int flip = 0; flip < 2; ++flip) {
      std::vector<Worker> ws;
      for (const auto& [name, re] : attrs) {
        const double e = flip ? 1.05 - re : re;
        ws.push_back(worker_at(name, g, 1.0, 30, e, e));
      }
      const WorkerPool pool(g, ws);
      RecruitConfig cfg;
      cfg.mode = RecruitMode::SWRS;
      const auto ranked = rank_candidates(pool, t, cfg);
      REQUIRE(ranked.size() == 4);
      CHECK(ranked[0].id == NodeId("A"));
      CHECK(ranked[1].id == NodeId("B"));
      CHECK(ranked[2].id == NodeId("C"));
      CHECK(ranked[3].id == NodeId("D"));
      cfg.mode = RecruitMode::IIWRS;
      const auto by_qos = rank_candidates(pool, t, cfg);
      CHECK(by_qos[0].id == NodeId(flip ? "A" : "D"));
    }
  }

  TEST_CASE("config validation") {
    RecruitConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.group_size = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = RecruitConfig{};
    cfg.acceptance_probability = -0.1;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  }
}
