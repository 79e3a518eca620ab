#include "osnrecruit/diffusion.hpp"

#include <algorithm>
#include <stdexcept>

#include <fmt/format.h>

#include "osnrecruit/seeding.hpp"

namespace osnrecruit {

void DiffusionConfig::validate() const {
  if (!(activation_probability >= 0.0 && activation_probability <= 1.0)) {
    throw std::invalid_argument(
        fmt::format("diffusion: activation probability must be in [0,1], got {}", activation_probability));
  }
  if (runs == 0) throw std::invalid_argument("diffusion: runs must be at least 1");
}

DiffusionOutcome simulate_ic(const SocialGraph& g, std::span<const NodeIndex> seeds, const DiffusionConfig& cfg,
                             std::uint64_t rng_seed, CascadeObserver* observer) {
  cfg.validate();
  Rng rng(rng_seed);
  std::vector<char> active(g.size(), 0);
  std::vector<NodeIndex> frontier;
  for (const NodeIndex s : seeds) {
    if (s >= g.size()) throw std::invalid_argument(fmt::format("seed index {} out of range", s));
    if (!active[s]) {
      active[s] = 1;
      frontier.push_back(s);
    }
  }
  std::sort(frontier.begin(), frontier.end());
  std::size_t active_count = frontier.size();
  DiffusionOutcome out;
  if (observer) observer->on_step(0, active_count);

  const double p = cfg.activation_probability;
  std::vector<NodeIndex> next;
  while (!frontier.empty()) {
    next.clear();
    for (const NodeIndex v : frontier) {
      const auto followers = g.followers(v);
      const auto probs = g.follower_edge_probabilities(v);
      for (std::size_t i = 0; i < followers.size(); ++i) {
        const NodeIndex u = followers[i];
        if (active[u]) continue;
        const double pe = (cfg.use_edge_probabilities && probs[i]) ? *probs[i] : p;
        // p = 0 and p = 1 consume no randomness.
        const bool success = pe >= 1.0 || (pe > 0.0 && uniform01(rng) < pe);
        if (observer) observer->on_attempt(v, u, success);
        if (success) {
          active[u] = 1;
          next.push_back(u);
        }
      }
    }
    if (next.empty()) break;
    ++out.steps;
    active_count += next.size();
    if (observer) observer->on_step(out.steps, active_count);
    std::sort(next.begin(), next.end());
    frontier.swap(next);
  }
  out.active.reserve(active_count);
  for (NodeIndex v = 0; v < g.size(); ++v) {
    if (active[v]) out.active.push_back(v);
  }
  return out;
}

InfluenceEstimate estimate_influence(const SocialGraph& g, std::span<const NodeIndex> seeds,
                                     const DiffusionConfig& cfg, std::uint64_t rng_seed) {
  cfg.validate();
  InfluenceEstimate est;
  est.sizes.reserve(cfg.runs);
  double total = 0.0;
  for (std::size_t i = 0; i < cfg.runs; ++i) {
    const auto outcome = simulate_ic(g, seeds, cfg, derive_seed(rng_seed, {i}));
    est.sizes.push_back(outcome.active.size());
    total += static_cast<double>(outcome.active.size());
  }
  est.mean = total / static_cast<double>(cfg.runs);
  return est;
}

std::size_t interested_influence(const SocialGraph& g, std::span<const NodeIndex> active,
                                 const TaskPortfolio& portfolio) {
  return static_cast<std::size_t>(std::count_if(active.begin(), active.end(), [&](NodeIndex v) {
    const auto& interests = g.node(v).interests;
    return std::any_of(interests.begin(), interests.end(), [&](const std::string& s) { return portfolio.contains(s); });
  }));
}

DiffusionOutcome simulate_ic(const SocialGraph& g, std::span<const NodeId> seeds, const DiffusionConfig& cfg,
                             std::uint64_t rng_seed) {
  const auto idx = g.indices_of(seeds);
  return simulate_ic(g, idx, cfg, rng_seed);
}

InfluenceEstimate estimate_influence(const SocialGraph& g, std::span<const NodeId> seeds,
                                     const DiffusionConfig& cfg, std::uint64_t rng_seed) {
  const auto idx = g.indices_of(seeds);
  return estimate_influence(g, idx, cfg, rng_seed);
}

std::size_t interested_influence(const SocialGraph& g, std::span<const NodeId> active,
                                 const TaskPortfolio& portfolio) {
  const auto idx = g.indices_of(active);
  return interested_influence(g, idx, portfolio);
}

}  // namespace osnrecruit
