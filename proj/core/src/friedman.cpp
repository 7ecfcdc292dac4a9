#include "instgen/friedman.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "instgen/errors.hpp"

namespace instgen {

std::vector<double> average_ranks(const std::vector<double>& block) {
  const std::size_t k = block.size();
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return block[a] < block[b]; });
  std::vector<double> ranks(k);
  for (std::size_t i = 0; i < k;) {
    std::size_t j = i;
    while (j + 1 < k && block[order[j + 1]] == block[order[i]]) ++j;
    const double r = (static_cast<double>(i + j) / 2.0) + 1.0;
    for (std::size_t m = i; m <= j; ++m) ranks[order[m]] = r;
    i = j + 1;
  }
  return ranks;
}

FriedmanResult friedman_test(const PenaltyMatrix& matrix, double alpha) {
  const std::size_t n = matrix.size();
  if (n < 2) throw DegenerateInput("friedman test needs at least two blocks");
  const std::size_t k = matrix.front().size();
  if (k < 2) throw DegenerateInput("friedman test needs at least two columns");
  for (const auto& row : matrix) {
    if (row.size() != k) throw DegenerateInput("ragged penalty matrix");
    for (double v : row) {
      if (std::isnan(v)) throw DegenerateInput("NaN penalty");
    }
  }

  FriedmanResult res;
  res.rank_sums.assign(k, 0.0);
  double a = 0.0;
  for (const auto& row : matrix) {
    const auto r = average_ranks(row);
    for (std::size_t j = 0; j < k; ++j) {
      res.rank_sums[j] += r[j];
      a += r[j] * r[j];
    }
  }
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);
  const double c = nd * kd * (kd + 1) * (kd + 1) / 4.0;
  const double denom = a - c;
  // Every block entirely tied: no evidence at all.
  if (denom <= 1e-12 * std::max(1.0, c)) return res;

  const double centre = nd * (kd + 1) / 2.0;
  double dev = 0.0;
  double sum_r2 = 0.0;
  for (double r : res.rank_sums) {
    dev += (r - centre) * (r - centre);
    sum_r2 += r * r;
  }
  res.statistic = (kd - 1) * dev / denom;
  boost::math::chi_squared chi(kd - 1);
  res.p_value = boost::math::cdf(boost::math::complement(chi, res.statistic));
  res.significant = res.p_value < alpha;
  if (!res.significant) return res;

  const double df = (nd - 1) * (kd - 1);
  boost::math::students_t t(df);
  const double q = boost::math::quantile(t, 1.0 - alpha / 2.0);
  const double var = std::max(0.0, 2.0 * (nd * a - sum_r2) / df);
  res.critical_difference = q * std::sqrt(var);
  const double best = *std::min_element(res.rank_sums.begin(), res.rank_sums.end());
  for (std::size_t j = 0; j < k; ++j) {
    if (res.rank_sums[j] - best > res.critical_difference) res.eliminated.push_back(j);
  }
  return res;
}

std::vector<std::size_t> friedman_eliminate(const PenaltyMatrix& matrix, double alpha) {
  return friedman_test(matrix, alpha).eliminated;
}

}  // namespace instgen
