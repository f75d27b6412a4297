#pragma once

#include <optional>
#include <span>
#include <vector>

#include "tempo/engine.hpp"
#include "tempo/formula.hpp"
#include "tempo/trace.hpp"

namespace tempo {

/// Threshold for the predicate margin p - tau. The maximum robustness is
/// 1 - tau (the score range is [0, 1] in probability space).
struct robustness_params {
  double tau = 0.5;

  double top() const noexcept { return 1.0 - tau; }
  void validate() const;
};

/// Space robustness (min/max semantics) over the same window grid the
/// LogSTOP engine uses. Atoms read the smoothed probability minus tau;
/// with w = 1 this is the plain per-timestep margin. Until uses the
/// half-open prefix [t, t') for its left operand.
class robustness_scorer {
 public:
  robustness_scorer(const score_trace& trace, const formula& f, robustness_params params = {});

  /// Root robustness at every grid index of `ctx`.
  std::span<const double> evaluate(const eval_context& ctx);

 private:
  const score_trace& trace_;
  const formula& formula_;
  robustness_params params_;
  std::vector<std::optional<std::size_t>> atom_class_;
  score_cache cache_;
};

/// Robustness of `f` at timestep t over [t, T] without smoothing.
double stl_robustness(const score_trace& trace, const formula& f, int t, robustness_params params = {});

/// Robustness on trace[t_s..t_e] with smoothing window w.
double stl_robustness_window(const score_trace& trace, const formula& f, int t_s, int t_e, int w, robustness_params params = {});

}  // namespace tempo
