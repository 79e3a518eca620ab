#pragma once

#include <string>
#include <vector>

#include "osnrecruit/seeding.hpp"

namespace osnrecruit {

/// A scalar sampling rule used for synthetic attributes.
///
/// `Empirical` resamples a fixed table i.i.d. with replacement.
class Distribution {
 public:
  enum class Kind { Constant, Uniform, Exponential, Empirical };

  static Distribution constant(double value);
  static Distribution uniform(double lo, double hi);
  static Distribution exponential(double mean);
  static Distribution empirical(std::vector<double> samples);

  Kind kind() const noexcept { return kind_; }
  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  const std::vector<double>& samples() const noexcept { return samples_; }

  double sample(Rng& rng) const;
  /// Smallest and largest value the rule can produce.
  double lower_bound() const;
  double upper_bound() const;

  std::string describe() const;

 private:
  Distribution(Kind kind, double a, double b) : kind_(kind), a_(a), b_(b) {}

  Kind kind_ = Kind::Constant;
  double a_ = 0.0;
  double b_ = 0.0;
  std::vector<double> samples_;
};

}  // namespace osnrecruit
