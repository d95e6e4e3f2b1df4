#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "interpeval/stats.hpp"

using interpeval::StatError;
using interpeval::StatErrorReason;

namespace {

using BigFloat = boost::multiprecision::cpp_bin_float_100;
using BigRational = boost::multiprecision::cpp_rational;

// Brute-force Pearson in 100-digit floats, no clever accumulation.
double pearson_oracle(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  BigFloat mean_x = 0, mean_y = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_x += BigFloat(x[i]);
    mean_y += BigFloat(y[i]);
  }
  mean_x /= n;
  mean_y /= n;
  BigFloat sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const BigFloat dx = BigFloat(x[i]) - mean_x;
    const BigFloat dy = BigFloat(y[i]) - mean_y;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  return static_cast<double>(sxy / (sqrt(sxx) * sqrt(syy)));
}

// Fleiss' kappa in exact rational arithmetic, straight from the formula.
// Returns 1 when both observed and expected agreement are exactly 1.
double kappa_oracle(const std::vector<std::vector<int>>& counts) {
  const std::size_t items = counts.size();
  const std::size_t cats = counts.front().size();
  long long raters = 0;
  for (int c : counts.front()) raters += c;

  BigRational p_bar = 0;
  std::vector<BigRational> share(cats, 0);
  for (const auto& row : counts) {
    long long sum_sq = 0;
    for (std::size_t j = 0; j < cats; ++j) {
      sum_sq += static_cast<long long>(row[j]) * row[j];
      share[j] += row[j];
    }
    p_bar += BigRational(sum_sq - raters, raters * (raters - 1));
  }
  p_bar /= items;

  BigRational p_e = 0;
  const BigRational total = BigRational(raters) * BigRational(items);
  for (std::size_t j = 0; j < cats; ++j) {
    const BigRational s = share[j] / total;
    p_e += s * s;
  }
  if (p_e == 1) return 1.0;
  return static_cast<double>(BigFloat(p_bar - p_e) / BigFloat(1 - p_e));
}

}  // namespace

TEST_CASE("pearson matches hand-checked values") {
  const std::vector<double> x{1, 2, 3, 4};
  const std::vector<double> y{1, 3, 2, 4};
  const auto result = interpeval::pearson(x, y);
  CHECK(result.r == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(result.n == 4);
}

TEST_CASE("pearson returns exact unit correlation for linear data") {
  const std::vector<double> x{1, 2, 3};
  CHECK(interpeval::pearson(x, std::vector<double>{2, 4, 6}).r == 1.0);
  CHECK(interpeval::pearson(x, std::vector<double>{6, 4, 2}).r == -1.0);
  CHECK(interpeval::pearson(x, std::vector<double>{-1, 1, 3}).r == 1.0);
}

TEST_CASE("pearson rejects bad input shapes") {
  const std::vector<double> x{1, 2, 3};
  CHECK_THROWS_WITH_AS(interpeval::pearson(x, std::vector<double>{1, 2}),
                       doctest::Contains("length mismatch"), StatError);
  CHECK_THROWS_AS(interpeval::pearson(std::vector<double>{1, 2},
                                      std::vector<double>{3, 4}),
                  StatError);
  try {
    interpeval::pearson(std::vector<double>{1, 2}, std::vector<double>{3, 4});
  } catch (const StatError& e) {
    CHECK(e.reason() == StatErrorReason::insufficient_n);
  }
}

TEST_CASE("pearson refuses zero variance instead of emitting NaN") {
  const std::vector<double> flat{2, 2, 2, 2};
  const std::vector<double> moving{1, 2, 3, 4};
  CHECK_THROWS_WITH_AS(interpeval::pearson(flat, moving),
                       doctest::Contains("undefined correlation"), StatError);
  try {
    interpeval::pearson(moving, flat);
    FAIL("expected StatError");
  } catch (const StatError& e) {
    CHECK(e.reason() == StatErrorReason::zero_variance);
  }
}

TEST_CASE("pearson is symmetric and affine invariant") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> value(-10.0, 10.0);
  std::uniform_real_distribution<double> scale(0.1, 5.0);
  std::uniform_real_distribution<double> shift(-20.0, 20.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> x(10), y(10);
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = value(rng);
      y[i] = value(rng);
    }
    const double r = interpeval::pearson(x, y).r;
    CHECK(interpeval::pearson(y, x).r == doctest::Approx(r).epsilon(1e-12));

    const double a = scale(rng);
    const double b = shift(rng);
    std::vector<double> rescaled(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) rescaled[i] = a * y[i] + b;
    CHECK(interpeval::pearson(x, rescaled).r == doctest::Approx(r).epsilon(1e-12));

    for (std::size_t i = 0; i < y.size(); ++i) rescaled[i] = -a * y[i] + b;
    CHECK(interpeval::pearson(x, rescaled).r == doctest::Approx(-r).epsilon(1e-12));
  }
}

TEST_CASE("pearson tracks an arbitrary-precision oracle on 1000 random instances") {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<std::size_t> length(3, 50);
  std::uniform_real_distribution<double> value(-100.0, 100.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = length(rng);
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = value(rng);
      y[i] = value(rng);
    }
    const double r = interpeval::pearson(x, y).r;
    const double expected = pearson_oracle(x, y);
    CHECK(std::abs(r - expected) < 1e-9);
    CHECK(r >= -1.0);
    CHECK(r <= 1.0);
  }
}

TEST_CASE("fleiss_kappa returns exactly 1 for perfect agreement") {
  const std::vector<std::vector<int>> unanimous{{4, 0, 0}, {0, 4, 0}, {0, 0, 4}};
  const auto result = interpeval::fleiss_kappa(unanimous);
  CHECK(result.kappa == 1.0);
  CHECK(result.n_items == 3);
  CHECK(result.n_raters == 4);
  CHECK(result.n_categories == 3);

  // Everyone always picks the same single category: expected agreement is
  // also 1, kappa is 1 by convention.
  const std::vector<std::vector<int>> one_category{{3, 0}, {3, 0}};
  CHECK(interpeval::fleiss_kappa(one_category).kappa == 1.0);
}

TEST_CASE("fleiss_kappa matches the two-item hand example") {
  // item 1 rated {A, A}, item 2 rated {A, B}.
  const std::vector<std::vector<int>> counts{{2, 0}, {1, 1}};
  const auto result = interpeval::fleiss_kappa(counts);
  CHECK(std::abs(result.kappa - (-1.0 / 3.0)) < 1e-12);
}

TEST_CASE("fleiss_kappa rejects malformed matrices") {
  CHECK_THROWS_AS(interpeval::fleiss_kappa({{2, 0}}), StatError);
  CHECK_THROWS_WITH_AS(interpeval::fleiss_kappa({{2, 0}, {1, 1, 0}}),
                       doctest::Contains("different category count"), StatError);
  CHECK_THROWS_WITH_AS(interpeval::fleiss_kappa({{2, 0}, {2, 1}}),
                       doctest::Contains("sums to"), StatError);
  CHECK_THROWS_AS(interpeval::fleiss_kappa({{1, 0}, {0, 1}}), StatError);
  CHECK_THROWS_AS(interpeval::fleiss_kappa({{2, -1}, {1, 0}}), StatError);
}

TEST_CASE("fleiss_kappa flags the degenerate one-category disagreement case") {
  // Impossible with real category counts per item summing consistently while
  // all shares land in one category yet agreement is imperfect; approximate
  // the guard by driving p_e to 1 with a single category column.
  const std::vector<std::vector<int>> single_column{{2}, {2}};
  CHECK(interpeval::fleiss_kappa(single_column).kappa == 1.0);
}

TEST_CASE("fleiss_kappa matches an exact-rational oracle on 200 random matrices") {
  std::mt19937_64 rng(913);
  std::uniform_int_distribution<int> item_count(2, 20);
  std::uniform_int_distribution<int> rater_count(2, 10);
  std::uniform_int_distribution<int> category_count(2, 6);
  for (int trial = 0; trial < 200; ++trial) {
    const int items = item_count(rng);
    const int raters = rater_count(rng);
    const int cats = category_count(rng);
    std::uniform_int_distribution<int> category(0, cats - 1);

    std::vector<std::vector<int>> counts(items, std::vector<int>(cats, 0));
    for (int i = 0; i < items; ++i) {
      for (int r = 0; r < raters; ++r) {
        ++counts[i][category(rng)];
      }
    }
    const double kappa = interpeval::fleiss_kappa(counts).kappa;
    CHECK(std::abs(kappa - kappa_oracle(counts)) < 1e-9);
  }
}

TEST_CASE("fleiss_kappa is invariant under item and category permutations") {
  std::mt19937_64 rng(414);
  std::uniform_int_distribution<int> category(0, 3);
  std::vector<std::vector<int>> counts(8, std::vector<int>(4, 0));
  for (auto& row : counts) {
    for (int r = 0; r < 5; ++r) ++row[category(rng)];
  }
  const double base = interpeval::fleiss_kappa(counts).kappa;

  auto shuffled_items = counts;
  std::shuffle(shuffled_items.begin(), shuffled_items.end(), rng);
  CHECK(interpeval::fleiss_kappa(shuffled_items).kappa ==
        doctest::Approx(base).epsilon(1e-12));

  std::vector<std::size_t> perm{2, 0, 3, 1};
  std::vector<std::vector<int>> relabeled(counts.size(), std::vector<int>(4, 0));
  for (std::size_t i = 0; i < counts.size(); ++i) {
    for (std::size_t j = 0; j < perm.size(); ++j) {
      relabeled[i][perm[j]] = counts[i][j];
    }
  }
  CHECK(interpeval::fleiss_kappa(relabeled).kappa ==
        doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("five_number handles the reference cases") {
  const std::vector<double> odd{1, 2, 3, 4, 5};
  const auto s = interpeval::five_number(odd);
  CHECK(s.median == 3.0);
  CHECK(s.q1 == 2.0);
  CHECK(s.q3 == 4.0);
  CHECK(s.iqr == 2.0);
  CHECK(s.whisker_low == 1.0);
  CHECK(s.whisker_high == 5.0);
  CHECK(s.outliers.empty());

  const std::vector<double> single{5};
  const auto d = interpeval::five_number(single);
  CHECK(d.median == 5.0);
  CHECK(d.q1 == 5.0);
  CHECK(d.q3 == 5.0);
  CHECK(d.iqr == 0.0);
  CHECK(d.whisker_low == 5.0);
  CHECK(d.whisker_high == 5.0);
  CHECK(d.outliers.empty());

  const std::vector<double> spiked{1, 1, 1, 1, 100};
  const auto o = interpeval::five_number(spiked);
  CHECK(o.q1 == 1.0);
  CHECK(o.q3 == 1.0);
  CHECK(o.iqr == 0.0);
  CHECK(o.whisker_low == 1.0);
  CHECK(o.whisker_high == 1.0);
  REQUIRE(o.outliers.size() == 1);
  CHECK(o.outliers.front() == 100.0);
}

TEST_CASE("five_number ordering and whisker bounds hold on random data") {
  std::mt19937_64 rng(555);
  std::uniform_int_distribution<std::size_t> length(1, 60);
  std::uniform_real_distribution<double> value(-50.0, 50.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> values(length(rng));
    for (double& v : values) v = value(rng);
    const auto s = interpeval::five_number(values);
    CHECK(s.q1 <= s.median);
    CHECK(s.median <= s.q3);
    CHECK(s.iqr == s.q3 - s.q1);
    CHECK(s.whisker_low >= s.q1 - 1.5 * s.iqr);
    CHECK(s.whisker_high <= s.q3 + 1.5 * s.iqr);
    const double min = *std::min_element(values.begin(), values.end());
    CHECK(min <= s.whisker_low);
    for (double out : s.outliers) {
      CHECK((out < s.q1 - 1.5 * s.iqr || out > s.q3 + 1.5 * s.iqr));
    }
  }
}

TEST_CASE("five_number rejects empty input") {
  CHECK_THROWS_AS(interpeval::five_number(std::vector<double>{}), StatError);
}

TEST_CASE("quantile_sorted interpolates between order statistics") {
  const std::vector<double> sorted{10, 20, 30, 40};
  CHECK(interpeval::quantile_sorted(sorted, 0.0) == 10.0);
  CHECK(interpeval::quantile_sorted(sorted, 1.0) == 40.0);
  CHECK(interpeval::quantile_sorted(sorted, 0.5) == doctest::Approx(25.0));
  CHECK(interpeval::quantile_sorted(sorted, 0.25) == doctest::Approx(17.5));
}
