#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "osnrecruit/portfolio.hpp"
#include "osnrecruit/social_graph.hpp"

namespace osnrecruit {

struct DiffusionConfig {
  /// Activation probability applied to every edge.
  double activation_probability = 0.02;
  /// Monte Carlo runs for estimate_influence.
  std::size_t runs = 100;
  /// Use per-edge probabilities from the edge file where present.
  bool use_edge_probabilities = false;

  void validate() const;
};

struct DiffusionOutcome {
  std::vector<NodeIndex> active;  // ascending
  /// Rounds that activated at least one node.
  std::size_t steps = 0;
};

/// Hooks for instrumenting a cascade; default implementations do nothing.
class CascadeObserver {
 public:
  virtual ~CascadeObserver() = default;
  virtual void on_attempt(NodeIndex /*from*/, NodeIndex /*to*/, bool /*success*/) {}
  virtual void on_step(std::size_t /*step*/, std::size_t /*active_count*/) {}
};

/// Independent Cascade. Influence flows against the follow direction: when v
/// becomes active, each currently inactive follower of v gets exactly one
/// activation attempt from v, in the following round. Seeds are active from
/// the start. Throws std::invalid_argument on an out-of-range seed.
DiffusionOutcome simulate_ic(const SocialGraph& g, std::span<const NodeIndex> seeds, const DiffusionConfig& cfg,
                             std::uint64_t rng_seed, CascadeObserver* observer = nullptr);

struct InfluenceEstimate {
  double mean = 0.0;
  std::vector<std::size_t> sizes;  // per run
};

/// Mean active-set size over cfg.runs cascades; run i uses derive_seed(rng_seed, {i}).
InfluenceEstimate estimate_influence(const SocialGraph& g, std::span<const NodeIndex> seeds,
                                     const DiffusionConfig& cfg, std::uint64_t rng_seed);

/// Active nodes holding at least one portfolio interest.
std::size_t interested_influence(const SocialGraph& g, std::span<const NodeIndex> active,
                                 const TaskPortfolio& portfolio);

// NodeId conveniences.
DiffusionOutcome simulate_ic(const SocialGraph& g, std::span<const NodeId> seeds, const DiffusionConfig& cfg,
                             std::uint64_t rng_seed);
InfluenceEstimate estimate_influence(const SocialGraph& g, std::span<const NodeId> seeds,
                                     const DiffusionConfig& cfg, std::uint64_t rng_seed);
std::size_t interested_influence(const SocialGraph& g, std::span<const NodeId> active,
                                 const TaskPortfolio& portfolio);

}  // namespace osnrecruit
