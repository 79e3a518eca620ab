#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "osnrecruit/node_id.hpp"

namespace osnrecruit {

class AoiPartition;
class TaskPortfolio;

/// Raised for malformed or inconsistent graph input. `line()` is 1-based, 0 when
/// the problem is not tied to a specific input line.
class GraphError : public std::runtime_error {
 public:
  GraphError(const std::string& what, std::size_t line = 0);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

struct SocialNode {
  NodeId id;
  std::string general_location;
  std::vector<std::string> interests;             // sorted, unique
  std::map<std::string, double> posts_per_interest;  // posts per unit time; keys are interests
};

/// Directed "follower follows followee" relation.
struct FollowEdge {
  NodeId follower;
  NodeId followee;
  std::optional<double> probability;  // optional per-edge activation probability
};

/// Immutable directed follower graph.
///
/// Nodes are stored in ascending NodeId order, so a NodeIndex comparison is a
/// NodeId comparison. Labels for interests and locations are interned; codes
/// are positions in `interest_labels()` / `location_labels()` (both sorted).
class SocialGraph {
 public:
  /// Validates and builds. Throws GraphError on duplicate ids, self-loops,
  /// duplicate edges, dangling endpoints, empty interest sets, or posts keyed
  /// by an interest the node does not hold.
  static SocialGraph build(std::vector<SocialNode> nodes, std::vector<FollowEdge> edges);

  std::size_t size() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept { return follower_list_.size(); }

  const SocialNode& node(NodeIndex i) const { return nodes_.at(i); }
  std::span<const SocialNode> nodes() const noexcept { return nodes_; }

  std::optional<NodeIndex> find(const NodeId& id) const;
  /// Throws std::out_of_range for unknown ids.
  NodeIndex index_of(const NodeId& id) const;
  std::vector<NodeIndex> indices_of(std::span<const NodeId> ids) const;

  /// Nodes u with (u follows v), ascending.
  std::span<const NodeIndex> followers(NodeIndex v) const;
  /// Nodes v with (u follows v), ascending.
  std::span<const NodeIndex> followees(NodeIndex u) const;
  std::size_t in_degree(NodeIndex v) const { return followers(v).size(); }
  std::size_t out_degree(NodeIndex u) const { return followees(u).size(); }
  /// Per-edge probabilities aligned with followers(v); nullopt entries when the
  /// edge carried none.
  std::span<const std::optional<double>> follower_edge_probabilities(NodeIndex v) const;
  bool has_edge_probabilities() const noexcept { return any_edge_probability_; }

  const std::vector<std::string>& interest_labels() const noexcept { return interest_labels_; }
  const std::vector<std::string>& location_labels() const noexcept { return location_labels_; }
  std::optional<std::size_t> interest_code(const std::string& label) const;
  std::optional<std::size_t> location_code(const std::string& label) const;
  std::span<const std::uint32_t> interest_codes(NodeIndex i) const;
  std::uint32_t location_of(NodeIndex i) const { return node_location_.at(i); }
  bool has_interest(NodeIndex i, const std::string& label) const;

  /// Every edge as (follower, followee), sorted by follower then followee.
  std::vector<FollowEdge> edges() const;

 private:
  SocialGraph() = default;

  std::vector<SocialNode> nodes_;
  std::unordered_map<NodeId, NodeIndex> index_;
  std::vector<std::size_t> follower_offsets_;
  std::vector<NodeIndex> follower_list_;
  std::vector<std::optional<double>> follower_probability_;
  std::vector<std::size_t> followee_offsets_;
  std::vector<NodeIndex> followee_list_;
  bool any_edge_probability_ = false;

  std::vector<std::string> interest_labels_;
  std::vector<std::string> location_labels_;
  std::vector<std::size_t> interest_offsets_;
  std::vector<std::uint32_t> interest_code_list_;
  std::vector<std::uint32_t> node_location_;
};

/// Parses the node and edge CSV formats. Nodes whose interest list is empty are
/// dropped along with their edges.
SocialGraph parse_graph(std::istream& nodes_csv, std::istream& edges_csv);
SocialGraph load_graph(const std::filesystem::path& nodes_path, const std::filesystem::path& edges_path);

/// Writes both CSV files with rows sorted by id / (follower, followee).
void write_graph(const SocialGraph& g, std::ostream& nodes_csv, std::ostream& edges_csv);
void save_graph(const SocialGraph& g, const std::filesystem::path& nodes_path,
                const std::filesystem::path& edges_path);

/// |union of followers(m) over members|. Throws std::out_of_range for unknown ids.
std::size_t unique_followers(const SocialGraph& g, std::span<const NodeId> members);
std::size_t unique_followers(const SocialGraph& g, std::span<const NodeIndex> members);

/// Nodes located inside the AoI, with in-degree >= min_degree and at least one
/// portfolio interest. Ascending NodeId.
std::vector<NodeId> filter_candidates(const SocialGraph& g, const AoiPartition& aoi,
                                      const TaskPortfolio& portfolio, std::size_t min_degree);
std::vector<NodeIndex> filter_candidate_indices(const SocialGraph& g, const AoiPartition& aoi,
                                                const TaskPortfolio& portfolio, std::size_t min_degree);

}  // namespace osnrecruit
