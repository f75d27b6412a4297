#include "tempo/metrics.hpp"

#include <algorithm>

#include "tempo/error.hpp"

namespace tempo {

double precision_at(std::span<const std::string> ranking, const std::set<std::string>& relevant, std::size_t k) {
  if (k == 0) throw contract_error("precision cutoff must be >= 1");
  const std::size_t n = std::min(k, ranking.size());
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n; ++i) hits += relevant.count(ranking[i]);
  return static_cast<double>(hits) / static_cast<double>(k);
}

query_metrics rank_metrics(std::span<const std::string> ranking, const std::set<std::string>& relevant) {
  if (relevant.empty()) throw data_error("query has no relevant ids");
  query_metrics m;
  m.relevant = relevant.size();
  const std::size_t r = relevant.size();
  std::size_t hits = 0;
  // Extended precision keeps simple cases such as (1 + 2/3) / 2 exact after
  // the final rounding to double.
  long double precision_sum = 0.0L;
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    if (!relevant.count(ranking[i])) continue;
    ++hits;
    if (m.first_relevant_rank == 0) m.first_relevant_rank = i + 1;
    precision_sum += static_cast<long double>(hits) / static_cast<long double>(i + 1);
  }
  if (hits != r) throw data_error("relevant id missing from ranking");
  m.average_precision = static_cast<double>(precision_sum / static_cast<long double>(r));
  m.precision_at_1 = precision_at(ranking, relevant, 1);
  m.precision_at_5 = precision_at(ranking, relevant, 5);
  m.precision_at_10 = precision_at(ranking, relevant, 10);
  m.precision_at_r = precision_at(ranking, relevant, r);
  // R@r and P@r coincide when the cutoff is r.
  m.recall_at_r = m.precision_at_r;
  return m;
}

metric_report ir_metrics(const std::vector<std::vector<std::string>>& rankings, const std::vector<std::set<std::string>>& relevance,
                         std::size_t database_size) {
  if (rankings.size() != relevance.size()) throw contract_error("rankings and relevance sets differ in count");
  if (rankings.empty()) throw data_error("no queries to evaluate");
  metric_report report;
  std::vector<std::size_t> first_ranks;
  for (std::size_t q = 0; q < rankings.size(); ++q) {
    if (rankings[q].size() != database_size) throw data_error("ranking shorter than database for query " + std::to_string(q));
    query_metrics m = rank_metrics(rankings[q], relevance[q]);
    report.precision_at_1 += m.precision_at_1;
    report.precision_at_5 += m.precision_at_5;
    report.precision_at_10 += m.precision_at_10;
    report.precision_at_r += m.precision_at_r;
    report.mean_average_precision += m.average_precision;
    report.recall_at_r += m.recall_at_r;
    report.mean_rank += static_cast<double>(m.first_relevant_rank);
    first_ranks.push_back(m.first_relevant_rank);
    report.queries.push_back(m);
  }
  const auto n = static_cast<double>(rankings.size());
  report.precision_at_1 /= n;
  report.precision_at_5 /= n;
  report.precision_at_10 /= n;
  report.precision_at_r /= n;
  report.mean_average_precision /= n;
  report.recall_at_r /= n;
  report.mean_rank /= n;
  std::sort(first_ranks.begin(), first_ranks.end());
  report.median_rank = static_cast<double>(first_ranks[(first_ranks.size() - 1) / 2]);
  return report;
}

double balanced_accuracy(const std::map<std::string, bool>& predictions, const std::map<std::string, bool>& labels) {
  if (predictions.size() != labels.size()) throw data_error("predictions and labels cover different ids");
  std::size_t tp = 0, fn = 0, tn = 0, fp = 0;
  for (const auto& [id, truth] : labels) {
    auto it = predictions.find(id);
    if (it == predictions.end()) throw data_error("no prediction for id '" + id + "'");
    if (truth) (it->second ? tp : fn) += 1;
    else (it->second ? fp : tn) += 1;
  }
  if (tp + fn == 0 || tn + fp == 0) throw data_error("balanced accuracy needs both classes among the labels");
  const double tpr = static_cast<double>(tp) / static_cast<double>(tp + fn);
  const double tnr = static_cast<double>(tn) / static_cast<double>(tn + fp);
  return (tpr + tnr) / 2.0;
}

}  // namespace tempo
