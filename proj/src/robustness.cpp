#include "tempo/robustness.hpp"

#include <algorithm>

#include "tempo/error.hpp"

namespace tempo {

void robustness_params::validate() const {
  if (!(tau > 0.0 && tau < 1.0)) throw contract_error("tau must lie in (0, 1)");
}

robustness_scorer::robustness_scorer(const score_trace& trace, const formula& f, robustness_params params)
    : trace_(trace), formula_(f), params_(params) {
  params_.validate();
  atom_class_.resize(f.size());
  for (int id = 0; id < static_cast<int>(f.size()); ++id) {
    const node& n = f.at(id);
    if (n.kind == op::atom) atom_class_[id] = trace.class_index(n.name);
  }
}

std::span<const double> robustness_scorer::evaluate(const eval_context& ctx) {
  ctx.validate(trace_.length());
  const int windows = ctx.grid_size();
  const auto last = static_cast<std::size_t>(windows - 1);
  const double top = params_.top();
  cache_.reset(formula_.size(), static_cast<std::size_t>(windows));

  for (int id = 0; id < static_cast<int>(formula_.size()); ++id) {
    const node& n = formula_.at(id);
    std::span<double> out = cache_.row(id);
    switch (n.kind) {
      case op::truth:
        std::fill(out.begin(), out.end(), top);
        break;
      case op::falsity:
        std::fill(out.begin(), out.end(), -top);
        break;
      case op::atom: {
        if (!atom_class_[id]) {
          std::fill(out.begin(), out.end(), -params_.tau);
          break;
        }
        auto probs = trace_.probabilities(*atom_class_[id]);
        for (int j = 0; j < windows; ++j) out[j] = window_mean(probs, ctx.grid_time(j), ctx.t_e, ctx.w) - params_.tau;
        break;
      }
      case op::negation: {
        auto a = cache_.row(n.left);
        for (int j = 0; j < windows; ++j) out[j] = -a[j];
        break;
      }
      case op::conjunction: {
        auto a = cache_.row(n.left);
        auto b = cache_.row(n.right);
        for (int j = 0; j < windows; ++j) out[j] = std::min(a[j], b[j]);
        break;
      }
      case op::disjunction: {
        auto a = cache_.row(n.left);
        auto b = cache_.row(n.right);
        for (int j = 0; j < windows; ++j) out[j] = std::max(a[j], b[j]);
        break;
      }
      case op::next: {
        auto a = cache_.row(n.left);
        for (std::size_t j = 0; j < last; ++j) out[j] = a[j + 1];
        out[last] = -top;
        break;
      }
      case op::always: {
        auto a = cache_.row(n.left);
        out[last] = a[last];
        for (std::size_t j = last; j-- > 0;) out[j] = std::min(a[j], out[j + 1]);
        break;
      }
      case op::eventually: {
        auto a = cache_.row(n.left);
        out[last] = a[last];
        for (std::size_t j = last; j-- > 0;) out[j] = std::max(a[j], out[j + 1]);
        break;
      }
      case op::until: {
        // sup_{t'} min(ρ2(t'), inf_{t'' in [t, t')} ρ1(t'')), empty inf = top,
        // unrolled as max(min(ρ2(t), top), min(ρ1(t), U(t + w))).
        auto a = cache_.row(n.left);
        auto b = cache_.row(n.right);
        out[last] = std::min(b[last], top);
        for (std::size_t j = last; j-- > 0;) out[j] = std::max(std::min(b[j], top), std::min(a[j], out[j + 1]));
        break;
      }
    }
  }
  return cache_.row(formula_.root());
}

double stl_robustness(const score_trace& trace, const formula& f, int t, robustness_params params) {
  if (t < 1 || t > trace.length()) throw contract_error("timestep out of range");
  robustness_scorer scorer(trace, f, params);
  return scorer.evaluate({t, trace.length(), 1})[0];
}

double stl_robustness_window(const score_trace& trace, const formula& f, int t_s, int t_e, int w, robustness_params params) {
  robustness_scorer scorer(trace, f, params);
  return scorer.evaluate({t_s, t_e, w})[0];
}

}  // namespace tempo
