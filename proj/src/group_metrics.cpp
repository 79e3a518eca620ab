#include "osnrecruit/group_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace osnrecruit {

std::string to_string(GroupObjective objective) {
  return objective == GroupObjective::Rank ? "rank" : "unique_followers";
}

GroupObjective parse_objective(const std::string& name) {
  if (name == "rank") return GroupObjective::Rank;
  if (name == "unique_followers") return GroupObjective::UniqueFollowers;
  throw std::invalid_argument(fmt::format("unknown objective '{}' (expected rank or unique_followers)", name));
}

double population_stddev(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  double mean = 0.0;
  for (const double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (const double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size()));
}

double rank(double distribution, double interest, double unique_followers) {
  if (distribution < 0.0 || interest < 0.0 || unique_followers < 0.0) {
    throw std::invalid_argument("rank: components must be non-negative");
  }
  return std::cbrt(distribution * interest * unique_followers);
}

GroupScorer::GroupScorer(const SocialGraph& g, const AoiPartition& aoi, const TaskPortfolio& portfolio,
                         GroupObjective objective)
    : graph_(&g), objective_(objective) {
  for (const auto& s : aoi.subareas()) subarea_weights_.push_back(s.weight);
  for (const auto& w : portfolio.interests()) interest_weights_.push_back(w.weight);

  std::vector<int> location_to_subarea(g.location_labels().size(), -1);
  for (std::size_t c = 0; c < g.location_labels().size(); ++c) {
    if (const auto idx = aoi.find(g.location_labels()[c])) location_to_subarea[c] = static_cast<int>(*idx);
  }
  std::vector<int> code_to_slot(g.interest_labels().size(), -1);
  for (std::size_t c = 0; c < g.interest_labels().size(); ++c) {
    if (const auto idx = portfolio.find(g.interest_labels()[c])) code_to_slot[c] = static_cast<int>(*idx);
  }
  node_subarea_.reserve(g.size());
  interest_offsets_.assign(1, 0);
  for (NodeIndex v = 0; v < g.size(); ++v) {
    node_subarea_.push_back(location_to_subarea[g.location_of(v)]);
    for (const auto code : g.interest_codes(v)) {
      if (code_to_slot[code] >= 0) interest_slots_.push_back(static_cast<std::uint32_t>(code_to_slot[code]));
    }
    std::sort(interest_slots_.begin() + static_cast<std::ptrdiff_t>(interest_offsets_.back()), interest_slots_.end());
    interest_offsets_.push_back(interest_slots_.size());
  }
}

std::span<const std::uint32_t> GroupScorer::portfolio_interests(NodeIndex v) const {
  return std::span<const std::uint32_t>(interest_slots_)
      .subspan(interest_offsets_.at(v), interest_offsets_[v + 1] - interest_offsets_[v]);
}

double GroupScorer::distribution(std::span<const NodeIndex> members) const {
  std::vector<std::size_t> counts(subarea_weights_.size(), 0);
  for (const NodeIndex m : members) {
    const int z = node_subarea_.at(m);
    if (z < 0) {
      throw std::invalid_argument(
          fmt::format("member '{}' is located outside the area of interest", graph_->node(m).id.str()));
    }
    ++counts[static_cast<std::size_t>(z)];
  }
  double covered_weight = 0.0;
  std::vector<double> ratios;
  for (std::size_t z = 0; z < counts.size(); ++z) {
    if (counts[z] == 0) continue;
    covered_weight += subarea_weights_[z];
    ratios.push_back(static_cast<double>(counts[z]) / subarea_weights_[z]);
  }
  const auto covered = static_cast<double>(ratios.size());
  return covered * covered_weight * std::exp(-population_stddev(ratios));
}

double GroupScorer::interest(std::span<const NodeIndex> members) const {
  std::vector<std::size_t> counts(interest_weights_.size(), 0);
  for (const NodeIndex m : members) {
    for (const auto slot : portfolio_interests(m)) ++counts[slot];
  }
  double weighted = 0.0;
  std::vector<double> ratios;
  ratios.reserve(counts.size());
  for (std::size_t x = 0; x < counts.size(); ++x) {
    weighted += interest_weights_[x] * static_cast<double>(counts[x]);
    ratios.push_back(static_cast<double>(counts[x]) / interest_weights_[x]);
  }
  return weighted * std::exp(-population_stddev(ratios));
}

std::size_t GroupScorer::unique_followers(std::span<const NodeIndex> members) const {
  // Generation-stamped marks, one buffer per thread.
  thread_local std::vector<std::uint32_t> stamp;
  thread_local std::uint32_t generation = 0;
  if (stamp.size() < graph_->size()) stamp.assign(graph_->size(), 0);
  if (++generation == 0) {
    std::fill(stamp.begin(), stamp.end(), 0);
    generation = 1;
  }
  std::size_t count = 0;
  for (const NodeIndex m : members) {
    for (const NodeIndex f : graph_->followers(m)) {
      if (stamp[f] != generation) {
        stamp[f] = generation;
        ++count;
      }
    }
  }
  return count;
}

bool GroupScorer::feasible(std::span<const NodeIndex> members) const {
  std::vector<bool> covered(interest_weights_.size(), false);
  std::size_t remaining = covered.size();
  for (const NodeIndex m : members) {
    for (const auto slot : portfolio_interests(m)) {
      if (!covered[slot]) {
        covered[slot] = true;
        --remaining;
      }
    }
  }
  return remaining == 0;
}

double GroupScorer::raw_fitness(std::span<const NodeIndex> members) const {
  const auto u = static_cast<double>(unique_followers(members));
  if (objective_ == GroupObjective::UniqueFollowers) return std::cbrt(u);
  return rank(distribution(members), interest(members), u);
}

double GroupScorer::fitness(std::span<const NodeIndex> members) const {
  if (objective_ == GroupObjective::Rank && !feasible(members)) return 0.0;
  return raw_fitness(members);
}

InfluencerGroup GroupScorer::evaluate(std::span<const NodeIndex> members) const {
  std::vector<NodeIndex> sorted(members.begin(), members.end());
  std::sort(sorted.begin(), sorted.end());
  InfluencerGroup out;
  for (const NodeIndex m : sorted) out.members.push_back(graph_->node(m).id);
  out.unique_followers = unique_followers(sorted);
  if (objective_ == GroupObjective::UniqueFollowers) {
    out.distribution = 1.0;
    out.interest = 1.0;
    out.feasible = true;
    out.rank = std::cbrt(static_cast<double>(out.unique_followers));
    return out;
  }
  out.distribution = distribution(sorted);
  out.interest = interest(sorted);
  out.feasible = feasible(sorted);
  out.rank = out.feasible ? rank(out.distribution, out.interest, static_cast<double>(out.unique_followers)) : 0.0;
  return out;
}

double distribution_score(const SocialGraph& g, std::span<const NodeId> members, const AoiPartition& aoi) {
  const auto idx = g.indices_of(members);
  std::vector<std::size_t> counts(aoi.size(), 0);
  for (const NodeIndex m : idx) {
    const auto z = aoi.find(g.node(m).general_location);
    if (!z) {
      throw std::invalid_argument(fmt::format("member '{}' is located outside the area of interest", g.node(m).id.str()));
    }
    ++counts[*z];
  }
  double covered_weight = 0.0;
  std::vector<double> ratios;
  for (std::size_t z = 0; z < counts.size(); ++z) {
    if (counts[z] == 0) continue;
    covered_weight += aoi[z].weight;
    ratios.push_back(static_cast<double>(counts[z]) / aoi[z].weight);
  }
  return static_cast<double>(ratios.size()) * covered_weight * std::exp(-population_stddev(ratios));
}

double interest_score(const SocialGraph& g, std::span<const NodeId> members, const TaskPortfolio& portfolio) {
  const auto idx = g.indices_of(members);
  double weighted = 0.0;
  std::vector<double> ratios;
  for (const auto& w : portfolio.interests()) {
    const auto count = static_cast<double>(
        std::count_if(idx.begin(), idx.end(), [&](NodeIndex m) { return g.has_interest(m, w.label); }));
    weighted += w.weight * count;
    ratios.push_back(count / w.weight);
  }
  return weighted * std::exp(-population_stddev(ratios));
}

bool group_feasible(const SocialGraph& g, std::span<const NodeId> members, const TaskPortfolio& portfolio) {
  const auto idx = g.indices_of(members);
  return std::all_of(portfolio.interests().begin(), portfolio.interests().end(), [&](const auto& w) {
    return std::any_of(idx.begin(), idx.end(), [&](NodeIndex m) { return g.has_interest(m, w.label); });
  });
}

InfluencerGroup score_group(const SocialGraph& g, std::span<const NodeId> members, const AoiPartition& aoi,
                            const TaskPortfolio& portfolio) {
  InfluencerGroup out;
  out.members.assign(members.begin(), members.end());
  std::sort(out.members.begin(), out.members.end());
  out.distribution = distribution_score(g, out.members, aoi);
  out.interest = interest_score(g, out.members, portfolio);
  out.unique_followers = unique_followers(g, std::span<const NodeId>(out.members));
  out.feasible = group_feasible(g, out.members, portfolio);
  out.rank = out.feasible ? rank(out.distribution, out.interest, static_cast<double>(out.unique_followers)) : 0.0;
  return out;
}

}  // namespace osnrecruit
