#pragma once

#include <cstddef>
#include <vector>

namespace instgen {

/// Rows are blocks (evaluation steps), columns are configurations.
using PenaltyMatrix = std::vector<std::vector<double>>;

/// 1-based ranks of one block, ties receiving their average rank.
std::vector<double> average_ranks(const std::vector<double>& block);

struct FriedmanResult {
  double statistic = 0.0;  // tie-corrected, chi-square with k-1 df
  double p_value = 1.0;
  bool significant = false;
  double critical_difference = 0.0;  // only meaningful when significant
  std::vector<double> rank_sums;
  std::vector<std::size_t> eliminated;  // column indices, ascending
};

/// Friedman test followed, when significant at `alpha`, by the Conover
/// post-hoc rule: a column is eliminated when its rank sum exceeds the best
/// one by more than
///   t(1 - alpha/2, (n-1)(k-1)) * sqrt(2 (n A - sum R^2) / ((n-1)(k-1)))
/// with A the sum of squared ranks. Throws DegenerateInput for fewer than
/// two blocks or columns, or ragged rows.
FriedmanResult friedman_test(const PenaltyMatrix& matrix, double alpha);

std::vector<std::size_t> friedman_eliminate(const PenaltyMatrix& matrix, double alpha);

}  // namespace instgen
