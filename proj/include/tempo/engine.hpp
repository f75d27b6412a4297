#pragma once

#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "tempo/formula.hpp"
#include "tempo/trace.hpp"

namespace tempo {

inline constexpr double neg_infinity = -std::numeric_limits<double>::infinity();

/// Evaluation window: scores cover [t_s, t_e] and are computed on the grid
/// t_s, t_s + w, t_s + 2w, ... <= t_e. Grid index j is relative to t_s.
struct eval_context {
  int t_s = 1;
  int t_e = 1;
  int w = 1;

  int grid_size() const noexcept { return (t_e - t_s) / w + 1; }
  int grid_time(int j) const noexcept { return t_s + j * w; }

  /// Throws contract_error unless 1 <= t_s <= t_e <= length and
  /// 1 <= w <= t_e - t_s + 1.
  void validate(int length) const;
};

/// log(1 - e^s) for s <= 0. Stable at both ends; log_complement(0) is -inf
/// and log_complement(-inf) is 0.
double log_complement(double s);

/// Probabilistic or in log space: log(1 - (1 - e^a)(1 - e^b)).
double log_or(double a, double b);

struct start_score {
  int t = 0;
  double score = neg_infinity;

  bool operator==(const start_score&) const = default;
};

/// Memo table of one evaluation, keyed by (formula node id, grid index).
class score_cache {
 public:
  void reset(std::size_t nodes, std::size_t windows);
  std::span<double> row(int node_id) { return {values_.data() + static_cast<std::size_t>(node_id) * windows_, windows_}; }
  std::span<const double> row(int node_id) const {
    return {values_.data() + static_cast<std::size_t>(node_id) * windows_, windows_};
  }
  std::size_t windows() const noexcept { return windows_; }

 private:
  std::vector<double> values_;
  std::size_t windows_ = 0;
};

/// LogSTOP evaluator bound to one (trace, formula) pair. Both must outlive
/// the scorer. Each evaluate() call fills the cache bottom-up, visiting every
/// (node, window) once. Not thread-safe; use one scorer per thread.
class logstop_scorer {
 public:
  logstop_scorer(const score_trace& trace, const formula& f);

  /// Root scores at every grid index of `ctx`. The span is invalidated by the
  /// next evaluate() call.
  std::span<const double> evaluate(const eval_context& ctx);

  double score(const eval_context& ctx) { return evaluate(ctx)[0]; }
  std::vector<start_score> all_starts(const eval_context& ctx);

  const score_cache& cache() const noexcept { return cache_; }

 private:
  const score_trace& trace_;
  const formula& formula_;
  std::vector<std::optional<std::size_t>> atom_class_;
  score_cache cache_;
  std::vector<double> scratch_;
};

/// LogSTOP score of `f` on trace[t_s..t_e] with smoothing window w.
double logstop(const score_trace& trace, const formula& f, int t_s, int t_e, int w);

/// Scores at every grid start anchor, anchor + w, ... <= t_e from a single
/// evaluation anchored at `anchor`.
std::vector<start_score> logstop_all_starts(const score_trace& trace, const formula& f, int anchor, int t_e, int w);

}  // namespace tempo
