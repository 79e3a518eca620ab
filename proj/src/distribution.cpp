#include "osnrecruit/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

namespace osnrecruit {

Distribution Distribution::constant(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("constant distribution: value must be finite");
  return {Kind::Constant, value, value};
}

Distribution Distribution::uniform(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi) {
    throw std::invalid_argument(fmt::format("uniform distribution: need finite lo <= hi, got [{}, {}]", lo, hi));
  }
  return {Kind::Uniform, lo, hi};
}

Distribution Distribution::exponential(double mean) {
  if (!std::isfinite(mean) || mean <= 0.0) {
    throw std::invalid_argument(fmt::format("exponential distribution: mean must be positive, got {}", mean));
  }
  return {Kind::Exponential, mean, 0.0};
}

Distribution Distribution::empirical(std::vector<double> samples) {
  if (samples.empty()) throw std::invalid_argument("empirical distribution: table is empty");
  for (const double v : samples) {
    if (!std::isfinite(v)) throw std::invalid_argument("empirical distribution: non-finite entry");
  }
  Distribution d{Kind::Empirical, 0.0, 0.0};
  d.samples_ = std::move(samples);
  return d;
}

double Distribution::sample(Rng& rng) const {
  switch (kind_) {
    case Kind::Constant:
      return a_;
    case Kind::Uniform:
      return a_ + (b_ - a_) * uniform01(rng);
    case Kind::Exponential:
      return -a_ * std::log1p(-uniform01(rng));
    case Kind::Empirical:
      return samples_[uniform_below(rng, samples_.size())];
  }
  return a_;
}

double Distribution::lower_bound() const {
  switch (kind_) {
    case Kind::Exponential:
      return 0.0;
    case Kind::Empirical:
      return *std::min_element(samples_.begin(), samples_.end());
    default:
      return a_;
  }
}

double Distribution::upper_bound() const {
  switch (kind_) {
    case Kind::Exponential:
      return std::numeric_limits<double>::infinity();
    case Kind::Empirical:
      return *std::max_element(samples_.begin(), samples_.end());
    default:
      return b_;
  }
}

std::string Distribution::describe() const {
  switch (kind_) {
    case Kind::Constant:
      return fmt::format("constant({})", a_);
    case Kind::Uniform:
      return fmt::format("uniform({}, {})", a_, b_);
    case Kind::Exponential:
      return fmt::format("exponential(mean={})", a_);
    case Kind::Empirical:
      return fmt::format("empirical(n={})", samples_.size());
  }
  return "?";
}

}  // namespace osnrecruit
