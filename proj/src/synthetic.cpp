#include "osnrecruit/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include <fmt/format.h>

namespace osnrecruit {
namespace {

std::vector<double> resolve_weights(const std::vector<std::string>& labels, const std::vector<double>& weights,
                                    const char* what) {
  if (labels.empty()) throw std::invalid_argument(fmt::format("synthetic graph: at least one {} label is required", what));
  if (std::set<std::string>(labels.begin(), labels.end()).size() != labels.size()) {
    throw std::invalid_argument(fmt::format("synthetic graph: duplicate {} label", what));
  }
  if (weights.empty()) return std::vector<double>(labels.size(), 1.0);
  if (weights.size() != labels.size()) {
    throw std::invalid_argument(fmt::format("synthetic graph: {} weights must match labels", what));
  }
  for (const double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument(fmt::format("synthetic graph: {} weights must be positive", what));
    }
  }
  return weights;
}

std::size_t categorical(Rng& rng, const std::vector<double>& weights) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  double u = uniform01(rng) * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (u < weights[i]) return i;
    u -= weights[i];
  }
  // Rounding can leave u marginally past the last bucket.
  for (std::size_t i = weights.size(); i-- > 0;) {
    if (weights[i] > 0.0) return i;
  }
  return weights.size() - 1;
}

/// Urn of node indices, each present once per unit of attractiveness.
struct Urn {
  std::vector<NodeIndex> balls;
  void add(NodeIndex v) { balls.push_back(v); }
  bool empty() const { return balls.empty(); }
  NodeIndex draw(Rng& rng) const { return balls[uniform_below(rng, balls.size())]; }
};

class EdgeSet {
 public:
  explicit EdgeSet(std::size_t n) : n_(n) {}
  bool insert(NodeIndex follower, NodeIndex followee) {
    return set_.insert(static_cast<std::uint64_t>(follower) * n_ + followee).second;
  }
  bool contains(NodeIndex follower, NodeIndex followee) const {
    return set_.contains(static_cast<std::uint64_t>(follower) * n_ + followee);
  }

 private:
  std::uint64_t n_;
  std::unordered_set<std::uint64_t> set_;
};

}  // namespace

SocialGraph generate_synthetic(const SynthConfig& cfg, std::uint64_t seed) {
  const std::size_t n = cfg.node_count;
  if (n < 1) throw std::invalid_argument("synthetic graph: node_count must be at least 1");
  const auto interest_w = resolve_weights(cfg.interests, cfg.interest_weights, "interest");
  const auto subarea_w = resolve_weights(cfg.subareas, cfg.subarea_weights, "subarea");
  if (cfg.max_interests_per_node < 1 || cfg.max_interests_per_node > cfg.interests.size()) {
    throw std::invalid_argument(
        fmt::format("synthetic graph: max_interests_per_node must be in [1, {}]", cfg.interests.size()));
  }
  if (cfg.post_rate.lower_bound() < 0.0) {
    throw std::invalid_argument("synthetic graph: post rate distribution must be non-negative");
  }
  if (!(cfg.interest_homophily >= 0.0 && cfg.interest_homophily <= 1.0)) {
    throw std::invalid_argument("synthetic graph: interest_homophily must be in [0,1]");
  }
  const std::uint64_t max_edges = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  if (cfg.edge_count > max_edges) {
    throw std::invalid_argument(
        fmt::format("synthetic graph: edge_count {} exceeds n(n-1)/2 = {}", cfg.edge_count, max_edges));
  }

  Rng attr_rng(derive_seed(seed, {label_key("attributes")}));
  std::vector<SocialNode> nodes(n);
  std::vector<std::vector<std::uint32_t>> node_interests(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& node = nodes[i];
    node.id = NodeId(std::to_string(i));
    node.general_location = cfg.subareas[categorical(attr_rng, subarea_w)];
    const std::size_t count = 1 + uniform_below(attr_rng, cfg.max_interests_per_node);
    auto w = interest_w;
    for (std::size_t c = 0; c < count; ++c) {
      const auto pick = categorical(attr_rng, w);
      w[pick] = 0.0;
      node_interests[i].push_back(static_cast<std::uint32_t>(pick));
    }
    std::sort(node_interests[i].begin(), node_interests[i].end());
    for (const auto code : node_interests[i]) {
      node.interests.push_back(cfg.interests[code]);
      node.posts_per_interest[cfg.interests[code]] = cfg.post_rate.sample(attr_rng);
    }
  }

  Rng edge_rng(derive_seed(seed, {label_key("edges")}));
  std::vector<FollowEdge> edges;
  edges.reserve(cfg.edge_count);
  EdgeSet taken(n);
  auto add_edge = [&](NodeIndex follower, NodeIndex followee) {
    edges.push_back({nodes[follower].id, nodes[followee].id, std::nullopt});
  };

  if (cfg.edge_model == EdgeModel::UniformRandom) {
    while (edges.size() < cfg.edge_count) {
      const auto u = static_cast<NodeIndex>(uniform_below(edge_rng, n));
      const auto v = static_cast<NodeIndex>(uniform_below(edge_rng, n));
      if (u != v && taken.insert(u, v)) add_edge(u, v);
    }
    return SocialGraph::build(std::move(nodes), std::move(edges));
  }

  Urn all;
  std::vector<Urn> by_interest(cfg.interests.size());
  auto enter = [&](NodeIndex v) {
    all.add(v);
    for (const auto code : node_interests[v]) by_interest[code].add(v);
  };
  auto pick_followee = [&](NodeIndex follower) -> NodeIndex {
    if (cfg.interest_homophily > 0.0 && uniform01(edge_rng) < cfg.interest_homophily) {
      const auto& mine = node_interests[follower];
      const auto& urn = by_interest[mine[uniform_below(edge_rng, mine.size())]];
      if (!urn.empty()) return urn.draw(edge_rng);
    }
    return all.draw(edge_rng);
  };

  // Growth phase: node t follows up to quota_t distinct earlier nodes.
  const std::size_t base = cfg.edge_count / n;
  const std::size_t extra = cfg.edge_count % n;
  for (NodeIndex t = 0; t < n; ++t) {
    const std::size_t quota = std::min<std::size_t>(base + (t < extra ? 1 : 0), t);
    std::vector<NodeIndex> chosen;
    std::size_t attempts = 0;
    while (chosen.size() < quota && attempts < 64 * (quota + 1)) {
      ++attempts;
      const NodeIndex v = pick_followee(t);
      if (v != t && taken.insert(t, v)) chosen.push_back(v);
    }
    for (NodeIndex v = 0; v < t && chosen.size() < quota; ++v) {
      if (taken.insert(t, v)) chosen.push_back(v);
    }
    for (const NodeIndex v : chosen) add_edge(t, v);
    enter(t);
    for (const NodeIndex v : chosen) enter(v);
  }
  // Early nodes could not place their full quota; top up with random followers.
  while (edges.size() < cfg.edge_count) {
    const auto u = static_cast<NodeIndex>(uniform_below(edge_rng, n));
    const NodeIndex v = pick_followee(u);
    if (u != v && taken.insert(u, v)) {
      add_edge(u, v);
      enter(v);
    }
  }
  return SocialGraph::build(std::move(nodes), std::move(edges));
}

SocialGraph generate_interest_adversarial(const InterestAdversarialConfig& cfg, std::uint64_t seed) {
  if (cfg.portfolio_interests.empty()) throw std::invalid_argument("adversarial graph: portfolio interests required");
  if (std::find(cfg.portfolio_interests.begin(), cfg.portfolio_interests.end(), cfg.off_topic_interest) !=
      cfg.portfolio_interests.end()) {
    throw std::invalid_argument("adversarial graph: off-topic interest must not be a portfolio interest");
  }
  if (cfg.hub_count == 0 || cfg.community_count == 0) {
    throw std::invalid_argument("adversarial graph: hub_count and community_count must be positive");
  }
  Rng rng(derive_seed(seed, {label_key("adversarial")}));
  std::vector<SocialNode> nodes;
  std::vector<FollowEdge> edges;
  std::size_t next_id = 0;
  auto make_node = [&](std::vector<std::string> interests) {
    SocialNode node;
    node.id = NodeId(std::to_string(next_id++));
    node.general_location = cfg.subarea;
    std::sort(interests.begin(), interests.end());
    node.interests = std::move(interests);
    for (const auto& i : node.interests) node.posts_per_interest[i] = cfg.post_rate.sample(rng);
    nodes.push_back(node);
    return node.id;
  };

  for (std::size_t h = 0; h < cfg.hub_count; ++h) {
    const auto hub = make_node({cfg.portfolio_interests.front()});
    for (std::size_t f = 0; f < cfg.hub_followers; ++f) {
      edges.push_back({make_node({cfg.off_topic_interest}), hub, std::nullopt});
    }
  }
  for (std::size_t c = 0; c < cfg.community_count; ++c) {
    const auto leader = make_node(cfg.portfolio_interests);
    for (std::size_t f = 0; f < cfg.community_followers; ++f) {
      const auto& interest = cfg.portfolio_interests[f % cfg.portfolio_interests.size()];
      edges.push_back({make_node({interest}), leader, std::nullopt});
    }
  }
  return SocialGraph::build(std::move(nodes), std::move(edges));
}

}  // namespace osnrecruit
