#include "interpeval/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace interpeval {

namespace {

double clamp_unit(double v) { return std::clamp(v, -1.0, 1.0); }

}  // namespace

PearsonResult pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw StatError(StatErrorReason::length_mismatch,
                    "pearson: length mismatch (" + std::to_string(x.size()) +
                        " vs " + std::to_string(y.size()) + ")");
  }
  const std::size_t n = x.size();
  if (n < 3) {
    throw StatError(StatErrorReason::insufficient_n,
                    "pearson: need at least 3 samples, got " + std::to_string(n));
  }

  long double mean_x = 0.0L;
  long double mean_y = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    mean_x += x[i];
    mean_y += y[i];
  }
  mean_x /= static_cast<long double>(n);
  mean_y /= static_cast<long double>(n);

  long double sxy = 0.0L;
  long double sxx = 0.0L;
  long double syy = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    const long double dx = x[i] - mean_x;
    const long double dy = y[i] - mean_y;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0L || syy == 0.0L) {
    throw StatError(StatErrorReason::zero_variance,
                    "pearson: undefined correlation, zero variance in " +
                        std::string(sxx == 0.0L ? "x" : "y"));
  }
  const long double r = sxy / (std::sqrt(sxx) * std::sqrt(syy));
  return {clamp_unit(static_cast<double>(r)), n};
}

KappaResult fleiss_kappa(const std::vector<std::vector<int>>& counts) {
  if (counts.size() < 2) {
    throw StatError(StatErrorReason::insufficient_n,
                    "fleiss_kappa: need at least 2 items, got " +
                        std::to_string(counts.size()));
  }
  const std::size_t n_items = counts.size();
  const std::size_t n_categories = counts.front().size();
  if (n_categories == 0) {
    throw StatError(StatErrorReason::empty_input, "fleiss_kappa: no categories");
  }

  long long raters = -1;
  for (std::size_t i = 0; i < n_items; ++i) {
    if (counts[i].size() != n_categories) {
      throw StatError(StatErrorReason::ragged_rows,
                      "fleiss_kappa: row " + std::to_string(i) +
                          " has a different category count");
    }
    long long row_sum = 0;
    for (int c : counts[i]) {
      if (c < 0) {
        throw StatError(StatErrorReason::empty_input,
                        "fleiss_kappa: negative count in row " + std::to_string(i));
      }
      row_sum += c;
    }
    if (raters < 0) {
      raters = row_sum;
    } else if (row_sum != raters) {
      throw StatError(StatErrorReason::ragged_rows,
                      "fleiss_kappa: row " + std::to_string(i) + " sums to " +
                          std::to_string(row_sum) + ", expected " +
                          std::to_string(raters));
    }
  }
  if (raters < 2) {
    throw StatError(StatErrorReason::insufficient_n,
                    "fleiss_kappa: need at least 2 raters per item, got " +
                        std::to_string(raters));
  }

  const long double n = static_cast<long double>(raters);
  const long double total = n * static_cast<long double>(n_items);

  long double p_bar = 0.0L;
  std::vector<long double> category_share(n_categories, 0.0L);
  for (const auto& row : counts) {
    long double sum_sq = 0.0L;
    for (std::size_t j = 0; j < n_categories; ++j) {
      sum_sq += static_cast<long double>(row[j]) * row[j];
      category_share[j] += row[j];
    }
    p_bar += (sum_sq - n) / (n * (n - 1.0L));
  }
  p_bar /= static_cast<long double>(n_items);

  long double p_e = 0.0L;
  for (std::size_t j = 0; j < n_categories; ++j) {
    const long double share = category_share[j] / total;
    p_e += share * share;
  }

  KappaResult result;
  result.n_items = n_items;
  result.n_raters = static_cast<std::size_t>(raters);
  result.n_categories = n_categories;

  if (p_e >= 1.0L) {
    // All assignments landed in one category. With perfect agreement the
    // conventional value is 1; anything else has no defined kappa.
    if (p_bar >= 1.0L) {
      result.kappa = 1.0;
      return result;
    }
    throw StatError(StatErrorReason::degenerate_distribution,
                    "fleiss_kappa: expected agreement is 1 with imperfect "
                    "observed agreement; kappa undefined");
  }
  if (p_bar >= 1.0L) {
    result.kappa = 1.0;
    return result;
  }
  result.kappa = static_cast<double>((p_bar - p_e) / (1.0L - p_e));
  return result;
}

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) {
    throw StatError(StatErrorReason::empty_input, "quantile of empty data");
  }
  const std::size_t n = sorted.size();
  if (n == 1) {
    return sorted[0];
  }
  const double h = p * static_cast<double>(n - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, n - 1);
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

FiveNumberSummary five_number(std::span<const double> values) {
  if (values.empty()) {
    throw StatError(StatErrorReason::empty_input, "five_number: empty input");
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());

  FiveNumberSummary s;
  s.q1 = quantile_sorted(sorted, 0.25);
  s.median = quantile_sorted(sorted, 0.5);
  s.q3 = quantile_sorted(sorted, 0.75);
  s.iqr = s.q3 - s.q1;
  const double lo_fence = s.q1 - 1.5 * s.iqr;
  const double hi_fence = s.q3 + 1.5 * s.iqr;

  // Whiskers fall back to the median if no point lands inside the fences,
  // which cannot happen for n >= 2 but keeps the summary total.
  s.whisker_low = s.median;
  s.whisker_high = s.median;
  bool any_inside = false;
  for (double v : sorted) {
    if (v < lo_fence || v > hi_fence) {
      s.outliers.push_back(v);
    } else if (!any_inside) {
      any_inside = true;
      s.whisker_low = v;
      s.whisker_high = v;
    } else {
      s.whisker_low = std::min(s.whisker_low, v);
      s.whisker_high = std::max(s.whisker_high, v);
    }
  }
  return s;
}

}  // namespace interpeval
