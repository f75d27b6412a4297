#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tempo/formula.hpp"
#include "tempo/matching.hpp"
#include "tempo/robustness.hpp"
#include "tempo/trace.hpp"

namespace tempo {

/// Inclusive timestep range [start, end].
struct time_span {
  int start = 0;
  int end = 0;

  int length() const noexcept { return end - start + 1; }
  bool operator==(const time_span&) const = default;
};

/// A ranked-retrieval request. Event lengths are inclusive timestep counts
/// in [min_length, max_length]; the smoothing window may not exceed
/// min_length.
struct retrieval_query {
  formula query;
  int min_length = 1;
  int max_length = 1;
  int k = 1;
  int window = 5;
  semantics scoring = semantics::logstop;
  robustness_params stl{};

  void validate() const;
};

struct ranked_entry {
  std::string id;
  double score = 0.0;
  std::optional<time_span> best;  // empty when the trace is shorter than min_length
};

using ranked_list = std::vector<ranked_entry>;

/// Best score of any admissible span of one trace. Candidate starts lie on
/// the window grid anchored at max(1, end - max_length + 1) for every end.
ranked_entry relevance_score(const score_trace& trace, const retrieval_query& q);

/// Scores every trace (in parallel) and returns the top k, by descending
/// score with ties broken by ascending id. Traces shorter than min_length
/// score -inf; a database where every trace is too short is an error.
ranked_list retrieve(std::span<const score_trace> db, const retrieval_query& q);

}  // namespace tempo
