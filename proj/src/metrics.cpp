#include "qtg/metrics.hpp"

#include <algorithm>

namespace qtg {

double rank_of_positive(double pos_score, const std::vector<double>& neg_scores) {
  double rank = 1.0;
  for (const double s : neg_scores) {
    if (s > pos_score)
      rank += 1.0;
    else if (s == pos_score)
      rank += 0.5;
  }
  return rank;
}

double mean_reciprocal_rank(const std::vector<double>& ranks) {
  if (ranks.empty()) throw EmptyQuerySetError("MRR over zero queries");
  double sum = 0.0;
  for (const double r : ranks) {
    if (r < 1.0) throw Error("rank below 1 is impossible");
    sum += 1.0 / r;
  }
  return sum / double(ranks.size());
}

double auc_score(const std::vector<double>& pos_scores,
                 const std::vector<double>& neg_scores) {
  if (pos_scores.empty() || neg_scores.empty())
    throw EmptyClassError("AUC needs at least one score of each class");

  // sort-based Mann-Whitney: assign midranks over the pooled scores, then
  // AUC = (rank-sum of positives - n_pos(n_pos+1)/2) / (n_pos * n_neg)
  struct Tagged {
    double score;
    bool positive;
  };
  std::vector<Tagged> pool;
  pool.reserve(pos_scores.size() + neg_scores.size());
  for (const double s : pos_scores) pool.push_back({s, true});
  for (const double s : neg_scores) pool.push_back({s, false});
  std::sort(pool.begin(), pool.end(),
            [](const Tagged& a, const Tagged& b) { return a.score < b.score; });

  double rank_sum_pos = 0.0;
  std::size_t i = 0;
  while (i < pool.size()) {
    std::size_t j = i;
    while (j < pool.size() && pool[j].score == pool[i].score) ++j;
    const double midrank = 0.5 * (double(i + 1) + double(j));  // ranks are 1-based
    for (std::size_t k = i; k < j; ++k)
      if (pool[k].positive) rank_sum_pos += midrank;
    i = j;
  }

  const double np = double(pos_scores.size());
  const double nn = double(neg_scores.size());
  return (rank_sum_pos - np * (np + 1.0) / 2.0) / (np * nn);
}

double BinaryCounts::accuracy() const {
  const std::size_t total = tp + fp + tn + fn;
  return total ? double(tp + tn) / double(total) : 0.0;
}

double BinaryCounts::precision() const {
  const std::size_t predicted = tp + fp;
  return predicted ? double(tp) / double(predicted) : 0.0;
}

BinaryCounts count_at_threshold(const std::vector<double>& pos_scores,
                                const std::vector<double>& neg_scores) {
  BinaryCounts c;
  for (const double s : pos_scores) (s > 0.5 ? c.tp : c.fn) += 1;
  for (const double s : neg_scores) (s > 0.5 ? c.fp : c.tn) += 1;
  return c;
}

}  // namespace qtg
