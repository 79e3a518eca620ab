#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "osnrecruit/geo.hpp"

namespace osnrecruit {

/// Tolerance for weight vectors that must sum to one.
inline constexpr double kWeightSumTolerance = 1e-9;

/// Weighted subareas making up the area of interest.
class AoiPartition {
 public:
  struct Subarea {
    std::string label;
    double weight = 0.0;
  };

  /// Throws std::invalid_argument unless weights are positive, sum to one and labels are unique.
  explicit AoiPartition(std::vector<Subarea> subareas);
  /// Equal weights over the given labels.
  static AoiPartition uniform(const std::vector<std::string>& labels);

  std::size_t size() const noexcept { return subareas_.size(); }
  const Subarea& operator[](std::size_t i) const { return subareas_.at(i); }
  const std::vector<Subarea>& subareas() const noexcept { return subareas_; }
  std::optional<std::size_t> find(const std::string& label) const;
  bool contains(const std::string& label) const { return find(label).has_value(); }

 private:
  std::vector<Subarea> subareas_;
};

/// A location-based crowdsourcing task.
class Task {
 public:
  /// Throws std::invalid_argument if time_constraint_min <= 1 (the travel-time
  /// factor uses it as a logarithm base), min_reputation is outside [0, 1] or
  /// the domain is empty.
  Task(LatLon location, double time_constraint_min, double min_reputation, std::string domain);

  LatLon location() const noexcept { return location_; }
  double time_constraint_min() const noexcept { return time_constraint_min_; }
  double min_reputation() const noexcept { return min_reputation_; }
  const std::string& domain() const noexcept { return domain_; }

 private:
  LatLon location_;
  double time_constraint_min_;
  double min_reputation_;
  std::string domain_;
};

/// The tasks being advertised plus a weight per distinct task domain.
class TaskPortfolio {
 public:
  struct InterestWeight {
    std::string label;
    double weight = 0.0;
  };

  /// Throws std::invalid_argument unless the weight labels are exactly the set of
  /// task domains and the weights are positive and sum to one.
  TaskPortfolio(std::vector<Task> tasks, std::vector<InterestWeight> interest_weights);
  /// Equal weights over the task domains, in first-appearance order.
  static TaskPortfolio with_uniform_weights(std::vector<Task> tasks);

  const std::vector<Task>& tasks() const noexcept { return tasks_; }
  std::size_t interest_count() const noexcept { return weights_.size(); }
  const InterestWeight& interest(std::size_t i) const { return weights_.at(i); }
  const std::vector<InterestWeight>& interests() const noexcept { return weights_; }
  std::optional<std::size_t> find(const std::string& label) const;
  bool contains(const std::string& label) const { return find(label).has_value(); }

 private:
  std::vector<Task> tasks_;
  std::vector<InterestWeight> weights_;
};

}  // namespace osnrecruit
