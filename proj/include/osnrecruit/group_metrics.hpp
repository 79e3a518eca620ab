#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "osnrecruit/portfolio.hpp"
#include "osnrecruit/social_graph.hpp"

namespace osnrecruit {

/// What a group search maximizes.
enum class GroupObjective {
  /// Geometric mean of distribution, interest and unique-follower scores;
  /// groups leaving a portfolio interest uncovered score 0.
  Rank,
  /// Unique followers only (distribution and interest held at 1, no coverage
  /// requirement). Models in-degree based selection.
  UniqueFollowers,
};

std::string to_string(GroupObjective objective);
GroupObjective parse_objective(const std::string& name);

struct InfluencerGroup {
  std::vector<NodeId> members;  // ascending
  double distribution = 0.0;    // D
  double interest = 0.0;        // I
  std::size_t unique_followers = 0;  // U
  double rank = 0.0;            // R
  bool feasible = false;
};

/// Population standard deviation; 0 for fewer than two values.
double population_stddev(std::span<const double> values);

/// Coverage times covered weight mass, damped by exp(-stddev) of the
/// member-count / weight ratios over covered subareas.
/// Throws std::invalid_argument if a member lies outside the AoI.
double distribution_score(const SocialGraph& g, std::span<const NodeId> members, const AoiPartition& aoi);

/// Weighted interest counts, damped by exp(-stddev) of count / weight over all
/// portfolio interests.
double interest_score(const SocialGraph& g, std::span<const NodeId> members, const TaskPortfolio& portfolio);

/// Geometric mean of the three group scores.
double rank(double distribution, double interest, double unique_followers);

/// True iff every portfolio interest is held by at least one member.
bool group_feasible(const SocialGraph& g, std::span<const NodeId> members, const TaskPortfolio& portfolio);

/// All four scores; infeasible groups get rank 0.
InfluencerGroup score_group(const SocialGraph& g, std::span<const NodeId> members, const AoiPartition& aoi,
                            const TaskPortfolio& portfolio);

/// Scores groups given as node indices, with per-node lookups precomputed.
/// Immutable after construction and safe to share across threads.
class GroupScorer {
 public:
  GroupScorer(const SocialGraph& g, const AoiPartition& aoi, const TaskPortfolio& portfolio,
              GroupObjective objective = GroupObjective::Rank);

  const SocialGraph& graph() const noexcept { return *graph_; }
  GroupObjective objective() const noexcept { return objective_; }
  std::size_t interest_count() const noexcept { return interest_weights_.size(); }

  double distribution(std::span<const NodeIndex> members) const;
  double interest(std::span<const NodeIndex> members) const;
  std::size_t unique_followers(std::span<const NodeIndex> members) const;
  bool feasible(std::span<const NodeIndex> members) const;
  /// Portfolio interest slots (positions in the portfolio) held by a node.
  std::span<const std::uint32_t> portfolio_interests(NodeIndex v) const;

  /// Objective value, zero for groups violating the coverage constraint.
  double fitness(std::span<const NodeIndex> members) const;
  /// Objective value without the coverage penalty.
  double raw_fitness(std::span<const NodeIndex> members) const;
  InfluencerGroup evaluate(std::span<const NodeIndex> members) const;

 private:
  const SocialGraph* graph_;
  GroupObjective objective_;
  std::vector<double> subarea_weights_;
  std::vector<double> interest_weights_;
  std::vector<int> node_subarea_;  // -1 outside the AoI
  std::vector<std::size_t> interest_offsets_;
  std::vector<std::uint32_t> interest_slots_;
};

}  // namespace osnrecruit
