#pragma once

#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace tempo {

/// Ranking quality for one query. r is the number of relevant ids.
struct query_metrics {
  std::size_t relevant = 0;
  double precision_at_1 = 0.0;
  double precision_at_5 = 0.0;
  double precision_at_10 = 0.0;
  double precision_at_r = 0.0;
  double average_precision = 0.0;
  double recall_at_r = 0.0;
  std::size_t first_relevant_rank = 0;  // 1-based
};

struct metric_report {
  std::vector<query_metrics> queries;
  double precision_at_1 = 0.0;
  double precision_at_5 = 0.0;
  double precision_at_10 = 0.0;
  double precision_at_r = 0.0;
  double mean_average_precision = 0.0;
  double recall_at_r = 0.0;
  double mean_rank = 0.0;    // MnR
  double median_rank = 0.0;  // MdR, lower median
};

/// |top-k ∩ relevant| / k; k may exceed the ranking length.
double precision_at(std::span<const std::string> ranking, const std::set<std::string>& relevant, std::size_t k);

/// Metrics for one full ranking of the database.
query_metrics rank_metrics(std::span<const std::string> ranking, const std::set<std::string>& relevant);

/// Aggregates over queries. Every ranking must list the whole database
/// (database_size ids) and every query needs at least one relevant id that
/// appears in its ranking.
metric_report ir_metrics(const std::vector<std::vector<std::string>>& rankings, const std::vector<std::set<std::string>>& relevance,
                         std::size_t database_size);

/// (TPR + TNR) / 2 with "true" as the positive class. Both maps must cover
/// the same ids and both classes must occur among the labels.
double balanced_accuracy(const std::map<std::string, bool>& predictions, const std::map<std::string, bool>& labels);

}  // namespace tempo
