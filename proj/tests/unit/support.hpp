#pragma once

#include <algorithm>
#include <filesystem>
#include <initializer_list>
#include <map>
#include <string>
#include <vector>

#include "osnrecruit/portfolio.hpp"
#include "osnrecruit/seeding.hpp"
#include "osnrecruit/social_graph.hpp"

namespace support {

using namespace osnrecruit;

inline std::filesystem::path data_dir() { return OSNRECRUIT_TEST_DATA; }

inline SocialNode make_node(const std::string& id, const std::string& location, std::vector<std::string> interests,
                            std::map<std::string, double> posts = {}) {
  return SocialNode{NodeId(id), location, std::move(interests), std::move(posts)};
}

inline FollowEdge follows(const std::string& follower, const std::string& followee) {
  return FollowEdge{NodeId(follower), NodeId(followee), std::nullopt};
}

inline std::vector<NodeId> ids(std::initializer_list<const char*> names) {
  std::vector<NodeId> out;
  for (const char* n : names) out.emplace_back(n);
  return out;
}

/// A, B and C have 6, 5 and 5 followers; B and C share none, each shares some with A.
inline SocialGraph counterexample_graph() {
  std::vector<SocialNode> nodes;
  for (const char* n : {"A", "B", "C", "D", "E", "F", "G", "H", "I", "J", "K", "L", "M"}) {
    nodes.push_back(make_node(n, "downtown", {"sports"}, {{"sports", 1.0}}));
  }
  std::vector<FollowEdge> edges;
  const std::map<std::string, std::string> followers{{"A", "DEFGHI"}, {"B", "DEFJK"}, {"C", "GHILM"}};
  for (const auto& [influencer, list] : followers) {
    for (const char f : list) edges.push_back(follows(std::string(1, f), influencer));
  }
  return SocialGraph::build(std::move(nodes), std::move(edges));
}

inline AoiPartition single_area(const std::string& label = "downtown") { return AoiPartition({{label, 1.0}}); }

inline Task task_for(const std::string& domain, LatLon at = {51.5, -0.12}, double tc = 60.0, double min_rep = 0.0) {
  return Task(at, tc, min_rep, domain);
}

inline TaskPortfolio portfolio_of(std::initializer_list<const char*> domains) {
  std::vector<Task> tasks;
  for (const char* d : domains) tasks.push_back(task_for(d));
  return TaskPortfolio::with_uniform_weights(std::move(tasks));
}

/// Erdos-Renyi style follower graph with numeric ids, labels drawn uniformly.
inline SocialGraph random_graph(std::size_t n, double edge_probability, std::uint64_t seed,
                                const std::vector<std::string>& interests = {"sports", "music", "books"},
                                const std::vector<std::string>& locations = {"north", "south"}) {
  Rng rng(seed);
  std::vector<SocialNode> nodes;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::string> mine{interests[uniform_below(rng, interests.size())]};
    const auto extra = interests[uniform_below(rng, interests.size())];
    if (extra != mine.front() && uniform01(rng) < 0.5) mine.push_back(extra);
    std::sort(mine.begin(), mine.end());
    std::map<std::string, double> posts;
    for (const auto& m : mine) posts[m] = static_cast<double>(uniform_below(rng, 10));
    nodes.push_back(make_node(std::to_string(i), locations[uniform_below(rng, locations.size())], mine, posts));
  }
  std::vector<FollowEdge> edges;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      if (u != v && uniform01(rng) < edge_probability) edges.push_back(follows(std::to_string(u), std::to_string(v)));
    }
  }
  return SocialGraph::build(std::move(nodes), std::move(edges));
}

}  // namespace support
