#include <algorithm>
#include <random>

#include "doctest.h"
#include "tempo/error.hpp"
#include "tempo/metrics.hpp"

using namespace tempo;

namespace {

std::vector<std::string> ids(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("d" + std::to_string(i));
  return out;
}

// Brute-force metrics straight from the definitions, in exact rationals
// (numerator, denominator) where it matters.
struct brute {
  double ap = 0, p_at_r = 0;
  std::size_t first = 0;
};

brute brute_metrics(const std::vector<std::string>& ranking, const std::set<std::string>& rel) {
  brute b;
  const std::size_t r = rel.size();
  double sum = 0;
  for (std::size_t k = 1; k <= ranking.size(); ++k) {
    if (!rel.count(ranking[k - 1])) continue;
    if (!b.first) b.first = k;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < k; ++i) hits += rel.count(ranking[i]);
    sum += static_cast<double>(hits) / static_cast<double>(k);
  }
  b.ap = sum / static_cast<double>(r);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < std::min(r, ranking.size()); ++i) hits += rel.count(ranking[i]);
  b.p_at_r = static_cast<double>(hits) / static_cast<double>(r);
  return b;
}

}  // namespace

TEST_CASE("relevance pattern 1010") {
  const auto ranking = ids(4);
  const std::set<std::string> rel = {"d0", "d2"};
  const auto m = rank_metrics(ranking, rel);
  CHECK(m.average_precision == 5.0 / 6.0);
  CHECK(m.recall_at_r == 0.5);
  CHECK(m.precision_at_r == 0.5);
  CHECK(m.first_relevant_rank == 1);
  CHECK(m.precision_at_1 == 1.0);
  CHECK(m.precision_at_5 == 2.0 / 5.0);
  CHECK(m.precision_at_10 == 2.0 / 10.0);
}

TEST_CASE("perfect rankings") {
  for (std::size_t r = 1; r <= 6; ++r) {
    const auto ranking = ids(8);
    const std::set<std::string> rel(ranking.begin(), ranking.begin() + static_cast<long>(r));
    const auto m = rank_metrics(ranking, rel);
    CHECK(m.average_precision == 1.0);
    CHECK(m.recall_at_r == 1.0);
    CHECK(m.first_relevant_rank == 1);
  }
}

TEST_CASE("mean and median first ranks") {
  const auto ranking = ids(10);
  const std::vector<std::vector<std::string>> rankings = {ranking, ranking};
  const std::vector<std::set<std::string>> rel = {{"d6"}, {"d8"}};
  const auto report = ir_metrics(rankings, rel, 10);
  CHECK(report.mean_rank == 8.0);
  CHECK(report.median_rank == 7.0);
  CHECK(report.queries.size() == 2);
  const auto three = ir_metrics({ranking, ranking, ranking}, {{"d0"}, {"d4"}, {"d9"}}, 10);
  CHECK(three.median_rank == 5.0);
  CHECK(three.precision_at_1 == 1.0 / 3.0);
}

TEST_CASE("random rankings agree with the brute-force definitions") {
  std::mt19937_64 gen(5);
  for (int iter = 0; iter < 500; ++iter) {
    const std::size_t n = 1 + gen() % 30;
    auto ranking = ids(n);
    std::shuffle(ranking.begin(), ranking.end(), gen);
    std::set<std::string> rel;
    for (const auto& id : ranking)
      if (gen() % 3 == 0) rel.insert(id);
    if (rel.empty()) rel.insert(ranking[gen() % n]);
    const auto m = rank_metrics(ranking, rel);
    const auto b = brute_metrics(ranking, rel);
    CHECK(m.average_precision == doctest::Approx(b.ap).epsilon(1e-14));
    CHECK(m.recall_at_r == b.p_at_r);
    CHECK(m.first_relevant_rank == b.first);
    CHECK(m.average_precision <= 1.0);
  }
}

TEST_CASE("metric errors") {
  CHECK_THROWS_AS(rank_metrics(ids(3), {}), data_error);
  CHECK_THROWS_AS(rank_metrics(ids(3), {"zz"}), data_error);
  CHECK_THROWS_AS(ir_metrics({ids(3)}, {{"d0"}}, 4), data_error);
  CHECK_THROWS_AS(ir_metrics({}, {}, 4), data_error);
  CHECK_THROWS_AS(precision_at(ids(3), {"d0"}, 0), contract_error);
}

TEST_CASE("balanced accuracy") {
  std::map<std::string, bool> labels, preds;
  for (int i = 0; i < 10; ++i) labels["p" + std::to_string(i)] = true;
  for (int i = 0; i < 10; ++i) labels["n" + std::to_string(i)] = false;
  CHECK(balanced_accuracy(labels, labels) == 1.0);
  for (const auto& [id, v] : labels) preds[id] = true;
  CHECK(balanced_accuracy(preds, labels) == 0.5);
  // TP = 8, FN = 2, TN = 6, FP = 4.
  for (int i = 0; i < 10; ++i) preds["p" + std::to_string(i)] = i < 8;
  for (int i = 0; i < 10; ++i) preds["n" + std::to_string(i)] = i < 4;
  CHECK(balanced_accuracy(preds, labels) == doctest::Approx(0.7).epsilon(1e-15));

  std::map<std::string, bool> only_pos = {{"a", true}};
  CHECK_THROWS_AS(balanced_accuracy(only_pos, only_pos), data_error);
  CHECK_THROWS_AS(balanced_accuracy({{"a", true}}, {{"b", true}, {"c", false}}), data_error);
  CHECK_THROWS_AS(balanced_accuracy({{"a", true}, {"x", true}}, {{"b", true}, {"c", false}}), data_error);
}
