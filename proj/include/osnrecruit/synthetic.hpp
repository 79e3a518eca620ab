#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "osnrecruit/distribution.hpp"
#include "osnrecruit/social_graph.hpp"

namespace osnrecruit {

enum class EdgeModel {
  /// Nodes arrive in id order and follow earlier nodes with probability
  /// proportional to (in-degree + 1); heavy-tailed in-degrees.
  PreferentialAttachment,
  /// Uniformly random distinct (follower, followee) pairs.
  UniformRandom,
};

struct SynthConfig {
  std::size_t node_count = 1000;
  std::size_t edge_count = 5000;
  EdgeModel edge_model = EdgeModel::PreferentialAttachment;

  std::vector<std::string> interests{"sports", "music", "movies", "books", "gaming"};
  std::vector<double> interest_weights;  // empty means uniform
  std::vector<std::string> subareas{"north", "central", "south"};
  std::vector<double> subarea_weights;  // empty means uniform

  /// Each node holds a uniformly drawn number of interests in [1, max_interests_per_node].
  std::size_t max_interests_per_node = 2;
  Distribution post_rate = Distribution::exponential(1.0);
  /// Probability that a followee is drawn only among nodes sharing an interest
  /// with the follower (preferential attachment model only).
  double interest_homophily = 0.0;
};

/// Throws std::invalid_argument for inconsistent parameters. Node ids are "0".."n-1".
SocialGraph generate_synthetic(const SynthConfig& cfg, std::uint64_t seed);

/// A graph where the best-followed nodes hold a single portfolio interest and
/// are followed by users with none, while smaller "community" nodes hold every
/// portfolio interest and are followed by interested users.
struct InterestAdversarialConfig {
  std::vector<std::string> portfolio_interests{"sports", "music"};
  std::string off_topic_interest = "gaming";
  std::string subarea = "central";
  std::size_t hub_count = 6;
  std::size_t hub_followers = 60;
  std::size_t community_count = 6;
  std::size_t community_followers = 40;
  Distribution post_rate = Distribution::exponential(1.0);
};

SocialGraph generate_interest_adversarial(const InterestAdversarialConfig& cfg, std::uint64_t seed);

}  // namespace osnrecruit
