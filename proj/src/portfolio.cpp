#include "osnrecruit/portfolio.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include <fmt/format.h>

namespace osnrecruit {
namespace {

template <typename Entry>
void validate_weights(const std::vector<Entry>& entries, const char* what) {
  if (entries.empty()) throw std::invalid_argument(fmt::format("{}: at least one entry is required", what));
  double sum = 0.0;
  std::set<std::string> seen;
  for (const auto& e : entries) {
    if (e.label.empty()) throw std::invalid_argument(fmt::format("{}: empty label", what));
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      throw std::invalid_argument(fmt::format("{}: weight of '{}' must be positive, got {}", what, e.label, e.weight));
    }
    if (!seen.insert(e.label).second) {
      throw std::invalid_argument(fmt::format("{}: duplicate label '{}'", what, e.label));
    }
    sum += e.weight;
  }
  if (std::abs(sum - 1.0) > kWeightSumTolerance) {
    throw std::invalid_argument(fmt::format("{}: weights must sum to 1, got {}", what, sum));
  }
}

template <typename Entry>
std::optional<std::size_t> find_label(const std::vector<Entry>& entries, const std::string& label) {
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].label == label) return i;
  }
  return std::nullopt;
}

}  // namespace

AoiPartition::AoiPartition(std::vector<Subarea> subareas) : subareas_(std::move(subareas)) {
  validate_weights(subareas_, "AoI partition");
}

AoiPartition AoiPartition::uniform(const std::vector<std::string>& labels) {
  std::vector<Subarea> s;
  for (const auto& l : labels) s.push_back({l, 1.0 / static_cast<double>(labels.size())});
  return AoiPartition(std::move(s));
}

std::optional<std::size_t> AoiPartition::find(const std::string& label) const {
  return find_label(subareas_, label);
}

Task::Task(LatLon location, double time_constraint_min, double min_reputation, std::string domain)
    : location_(location),
      time_constraint_min_(time_constraint_min),
      min_reputation_(min_reputation),
      domain_(std::move(domain)) {
  if (!(time_constraint_min_ > 1.0) || !std::isfinite(time_constraint_min_)) {
    throw std::invalid_argument(
        fmt::format("task time constraint must exceed 1 minute, got {}", time_constraint_min_));
  }
  if (!(min_reputation_ >= 0.0 && min_reputation_ <= 1.0)) {
    throw std::invalid_argument(fmt::format("task minimum reputation must be in [0,1], got {}", min_reputation_));
  }
  if (domain_.empty()) throw std::invalid_argument("task domain must not be empty");
}

TaskPortfolio::TaskPortfolio(std::vector<Task> tasks, std::vector<InterestWeight> interest_weights)
    : tasks_(std::move(tasks)), weights_(std::move(interest_weights)) {
  if (tasks_.empty()) throw std::invalid_argument("task portfolio: at least one task is required");
  validate_weights(weights_, "task portfolio interests");
  std::set<std::string> domains;
  for (const auto& t : tasks_) domains.insert(t.domain());
  std::set<std::string> labels;
  for (const auto& w : weights_) labels.insert(w.label);
  if (domains != labels) {
    throw std::invalid_argument("task portfolio: interest weights must cover exactly the task domains");
  }
}

TaskPortfolio TaskPortfolio::with_uniform_weights(std::vector<Task> tasks) {
  std::vector<std::string> order;
  for (const auto& t : tasks) {
    if (std::find(order.begin(), order.end(), t.domain()) == order.end()) order.push_back(t.domain());
  }
  std::vector<InterestWeight> w;
  for (const auto& l : order) w.push_back({l, 1.0 / static_cast<double>(order.size())});
  return TaskPortfolio(std::move(tasks), std::move(w));
}

std::optional<std::size_t> TaskPortfolio::find(const std::string& label) const {
  return find_label(weights_, label);
}

}  // namespace osnrecruit
