#ifndef INTERPEVAL_STATS_HPP_
#define INTERPEVAL_STATS_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "interpeval/error.hpp"

namespace interpeval {

enum class StatErrorReason {
  length_mismatch,
  insufficient_n,
  zero_variance,
  ragged_rows,
  degenerate_distribution,
  empty_input,
};

class StatError : public DataError {
 public:
  StatError(StatErrorReason reason, const std::string& message)
      : DataError(message), reason_(reason) {}

  StatErrorReason reason() const noexcept { return reason_; }

 private:
  StatErrorReason reason_;
};

struct PearsonResult {
  double r = 0.0;
  std::size_t n = 0;
};

// Pearson product-moment correlation. Requires |x| == |y| >= 3 and nonzero
// variance on both sides; a constant vector raises StatError with
// zero_variance rather than returning 0 or NaN. Accumulation runs in long
// double and the result is clamped to [-1, 1].
PearsonResult pearson(std::span<const double> x, std::span<const double> y);

struct KappaResult {
  double kappa = 0.0;
  std::size_t n_items = 0;
  std::size_t n_raters = 0;
  std::size_t n_categories = 0;
};

// Fleiss' kappa over an item x category count matrix. Every row must sum to
// the same rater count n >= 2 and there must be at least 2 items. Perfect
// agreement returns exactly 1.0 (the 0/0 case is defined as 1 by
// convention).
KappaResult fleiss_kappa(const std::vector<std::vector<int>>& counts);

struct FiveNumberSummary {
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double iqr = 0.0;
  // Tukey whiskers: the most extreme data points inside
  // [q1 - 1.5*iqr, q3 + 1.5*iqr].
  double whisker_low = 0.0;
  double whisker_high = 0.0;
  std::vector<double> outliers;
};

// Quantiles use linear interpolation between order statistics at positions
// p*(n-1) (the common "type-7" plotting convention).
FiveNumberSummary five_number(std::span<const double> values);

// Type-7 quantile of already-sorted data, p in [0, 1].
double quantile_sorted(std::span<const double> sorted, double p);

}  // namespace interpeval

#endif  // INTERPEVAL_STATS_HPP_
