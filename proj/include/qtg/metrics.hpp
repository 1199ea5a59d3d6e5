// Ranking and classification metrics. Ties are handled by midranks so that
// AUC matches the Mann-Whitney statistic exactly.

#pragma once

#include <cstddef>
#include <vector>

#include "qtg/common.hpp"

namespace qtg {

// midrank of the positive among {positive} + negatives:
// 1 + #(strictly greater) + 0.5 * #(equal)
double rank_of_positive(double pos_score, const std::vector<double>& neg_scores);

// mean of 1/rank. Throws EmptyQuerySetError on no ranks.
double mean_reciprocal_rank(const std::vector<double>& ranks);

// Mann-Whitney AUC with 0.5 credit for ties, computed by sorting.
// Throws EmptyClassError when either class is empty.
double auc_score(const std::vector<double>& pos_scores,
                 const std::vector<double>& neg_scores);

struct BinaryCounts {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;

  double accuracy() const;
  double precision() const;  // 0 when nothing was predicted positive
};

// threshold 0.5: score > 0.5 predicts positive
BinaryCounts count_at_threshold(const std::vector<double>& pos_scores,
                                const std::vector<double>& neg_scores);

struct MetricsReport {
  double accuracy = 0.0;
  double precision = 0.0;
  double auc = 0.0;
  double mrr = 0.0;
  std::size_t n_queries = 0;
};

}  // namespace qtg
