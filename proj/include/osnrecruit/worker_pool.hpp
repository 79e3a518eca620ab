#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "osnrecruit/distribution.hpp"
#include "osnrecruit/geo.hpp"
#include "osnrecruit/social_graph.hpp"

namespace osnrecruit {

/// Disk standing in for a subarea's extent.
struct SubareaGeometry {
  LatLon center;
  double radius_km = 10.0;
};

/// How MCS attributes are synthesized for newly registered users.
struct AttributeModel {
  std::map<std::string, SubareaGeometry> geometry;  // keyed by subarea label
  Distribution speed_kmh = Distribution::uniform(10.0, 50.0);
  Distribution residual_energy = Distribution::uniform(0.0, 1.0);
  Distribution reputation = Distribution::constant(0.5);  // first-time registrants

  /// Throws std::invalid_argument when a distribution can leave its valid range.
  void validate() const;
};

struct Worker {
  NodeIndex node = 0;
  NodeId id;
  LatLon gps;
  double avg_speed_kmh = 0.0;
  double residual_energy = 0.0;
  double reputation = 0.0;
};

/// Registered workers in ascending NodeId order. Borrows the graph, which must
/// outlive the pool.
class WorkerPool {
 public:
  WorkerPool(const SocialGraph& graph, std::vector<Worker> workers);

  const SocialGraph& graph() const noexcept { return *graph_; }
  std::span<const Worker> workers() const noexcept { return workers_; }
  std::size_t size() const noexcept { return workers_.size(); }
  bool empty() const noexcept { return workers_.empty(); }
  const Worker& operator[](std::size_t i) const { return workers_.at(i); }
  const Worker* find(NodeIndex node) const;
  const SocialNode& social(const Worker& w) const { return graph_->node(w.node); }

  /// Pool restricted to the given positions (any order; result re-sorted).
  WorkerPool subset(std::span<const std::size_t> positions) const;

 private:
  const SocialGraph* graph_;
  std::vector<Worker> workers_;
};

/// One worker per active node. GPS is uniform over the node's subarea disk;
/// every attribute is drawn from a stream keyed by (seed, node), so results do
/// not depend on the order of `active`. Throws std::invalid_argument when a
/// node's subarea has no geometry entry.
WorkerPool register_workers(const SocialGraph& g, std::span<const NodeIndex> active, const AttributeModel& model,
                            std::uint64_t seed);

class TableError : public std::runtime_error {
 public:
  TableError(const std::string& what, std::size_t line = 0);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Columns read from an attribute CSV. Recognized headers are `speed_kmh`
/// (positive) and `reputation` (in [0,1]); other columns are ignored.
struct AttributeTable {
  std::map<std::string, std::vector<double>> columns;

  bool has(const std::string& column) const { return columns.contains(column); }
  /// Empirical distribution over a column; throws TableError if absent.
  Distribution distribution(const std::string& column) const;
};

AttributeTable parse_attribute_table(std::istream& csv);
AttributeTable load_attribute_table(const std::filesystem::path& path);

}  // namespace osnrecruit
