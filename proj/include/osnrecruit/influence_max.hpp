#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "osnrecruit/group_metrics.hpp"

namespace osnrecruit {

struct GaConfig {
  std::size_t population_size = 100;
  std::size_t max_generations = 500;
  /// Stop after this many generations without improving the best score.
  std::size_t convergence_window = 50;
  double crossover_rate = 0.9;
  double mutation_rate = 0.05;
  std::size_t elitism_count = 2;
  /// Stop as soon as the best score reaches this value.
  std::optional<double> max_possible_score;

  /// Throws std::invalid_argument.
  void validate() const;
};

/// No group satisfying the coverage constraint was found.
class InfeasibleSelection : public std::runtime_error {
 public:
  InfeasibleSelection(const std::string& what, InfluencerGroup best_infeasible)
      : std::runtime_error(what), best_(std::move(best_infeasible)) {}
  const InfluencerGroup& best_infeasible() const noexcept { return best_; }

 private:
  InfluencerGroup best_;
};

enum class GaTermination { FullGroup, Converged, MaxGenerations, MaxScoreReached };

struct GaReport {
  std::size_t generations = 0;
  std::size_t evaluations = 0;
  GaTermination termination = GaTermination::FullGroup;
};

/// Genetic search over k-subsets of `candidates` maximizing the scorer's
/// fitness. The initial population contains the greedy solution, so the result
/// never scores below greedy_select. Returns the best feasible group seen in
/// any generation. Deterministic for a given seed.
InfluencerGroup ga_select(const GroupScorer& scorer, std::span<const NodeIndex> candidates, std::size_t k,
                          const GaConfig& cfg, std::uint64_t seed, GaReport* report = nullptr);

/// Grows a group one candidate at a time, adding the one with the largest
/// marginal gain of the scorer's unpenalized fitness. Ties go to the smaller
/// NodeId. The returned scores include the coverage penalty.
InfluencerGroup greedy_select(const GroupScorer& scorer, std::span<const NodeIndex> candidates, std::size_t k);

inline constexpr std::uint64_t kDefaultCombinationCap = 1'000'000;

/// Exact argmax over every feasible k-subset; ties go to the lexicographically
/// smallest member list. Throws std::length_error when C(n, k) exceeds `cap`.
InfluencerGroup exhaustive_select(const GroupScorer& scorer, std::span<const NodeIndex> candidates, std::size_t k,
                                  std::uint64_t cap = kDefaultCombinationCap);

/// Binomial coefficient saturating at UINT64_MAX.
std::uint64_t combination_count(std::uint64_t n, std::uint64_t k);

// NodeId-based conveniences building a scorer for one call.
InfluencerGroup ga_select(const SocialGraph& g, std::span<const NodeId> candidates, std::size_t k,
                          const AoiPartition& aoi, const TaskPortfolio& portfolio, const GaConfig& cfg,
                          std::uint64_t seed, GroupObjective objective = GroupObjective::Rank);
InfluencerGroup greedy_select(const SocialGraph& g, std::span<const NodeId> candidates, std::size_t k,
                              const AoiPartition& aoi, const TaskPortfolio& portfolio,
                              GroupObjective objective = GroupObjective::Rank);
InfluencerGroup exhaustive_select(const SocialGraph& g, std::span<const NodeId> candidates, std::size_t k,
                                  const AoiPartition& aoi, const TaskPortfolio& portfolio,
                                  GroupObjective objective = GroupObjective::Rank,
                                  std::uint64_t cap = kDefaultCombinationCap);

}  // namespace osnrecruit
