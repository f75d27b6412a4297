#include "tempo/retrieval.hpp"

#include <algorithm>

#include "tempo/engine.hpp"
#include "tempo/error.hpp"
#include "tempo/parallel.hpp"

namespace tempo {

void retrieval_query::validate() const {
  if (min_length < 1 || min_length > max_length) throw contract_error("event lengths must satisfy 1 <= tlo <= thi");
  if (k < 1) throw contract_error("k must be >= 1");
  if (window < 1) throw contract_error("window must be >= 1");
  if (window > min_length) throw contract_error("window must not exceed the minimum event length");
  if (scoring == semantics::stl) stl.validate();
}

namespace {

template <class Scorer>
ranked_entry best_span(const score_trace& trace, const retrieval_query& q, Scorer& scorer) {
  ranked_entry entry{trace.id(), neg_infinity, std::nullopt};
  for (int end = q.min_length; end <= trace.length(); ++end) {
    const eval_context ctx{std::max(1, end - q.max_length + 1), end, q.window};
    auto scores = scorer.evaluate(ctx);
    for (int j = 0; j < ctx.grid_size(); ++j) {
      const int start = ctx.grid_time(j);
      if (end - start + 1 < q.min_length) break;
      const double s = scores[static_cast<std::size_t>(j)];
      if (!entry.best || s > entry.score) {
        entry.score = s;
        entry.best = time_span{start, end};
      }
    }
  }
  return entry;
}

}  // namespace

ranked_entry relevance_score(const score_trace& trace, const retrieval_query& q) {
  q.validate();
  if (q.scoring == semantics::stl) {
    robustness_scorer scorer(trace, q.query, q.stl);
    return best_span(trace, q, scorer);
  }
  logstop_scorer scorer(trace, q.query);
  return best_span(trace, q, scorer);
}

ranked_list retrieve(std::span<const score_trace> db, const retrieval_query& q) {
  q.validate();
  if (db.empty()) throw data_error("empty database");
  if (std::none_of(db.begin(), db.end(), [&](const score_trace& t) { return t.length() >= q.min_length; })) {
    throw data_error("minimum event length exceeds every trace length");
  }
  ranked_list all(db.size());
  parallel_for(db.size(), [&](std::size_t i) { all[i] = relevance_score(db[i], q); });
  std::sort(all.begin(), all.end(), [](const ranked_entry& a, const ranked_entry& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.id < b.id;
  });
  if (all.size() > static_cast<std::size_t>(q.k)) all.resize(static_cast<std::size_t>(q.k));
  return all;
}

}  // namespace tempo
