#include "tempo/engine.hpp"

#include <cmath>

#include "tempo/error.hpp"

namespace tempo {

void eval_context::validate(int length) const {
  if (t_s < 1 || t_s > t_e || t_e > length) {
    throw contract_error("evaluation range [" + std::to_string(t_s) + ", " + std::to_string(t_e) + "] outside trace of length " +
                         std::to_string(length));
  }
  if (w < 1 || w > t_e - t_s + 1) {
    throw contract_error("window " + std::to_string(w) + " must lie in [1, " + std::to_string(t_e - t_s + 1) + "]");
  }
}

double log_complement(double s) {
  if (!(s <= 0.0)) throw contract_error("log_complement expects a log score <= 0");
  if (s == neg_infinity) return 0.0;
  // Mächler's log1mexp split at -log 2.
  if (s > -0.6931471805599453) return std::log(-std::expm1(s));
  return std::log1p(-std::exp(s));
}

double log_or(double a, double b) {
  if (a == neg_infinity) return b;
  if (b == neg_infinity) return a;
  return log_complement(log_complement(a) + log_complement(b));
}

void score_cache::reset(std::size_t nodes, std::size_t windows) {
  windows_ = windows;
  values_.assign(nodes * windows, neg_infinity);
}

logstop_scorer::logstop_scorer(const score_trace& trace, const formula& f) : trace_(trace), formula_(f) {
  atom_class_.resize(f.size());
  for (int id = 0; id < static_cast<int>(f.size()); ++id) {
    const node& n = f.at(id);
    if (n.kind == op::atom) atom_class_[id] = trace.class_index(n.name);
  }
}

std::span<const double> logstop_scorer::evaluate(const eval_context& ctx) {
  ctx.validate(trace_.length());
  const int windows = ctx.grid_size();
  const auto last = static_cast<std::size_t>(windows - 1);
  cache_.reset(formula_.size(), static_cast<std::size_t>(windows));

  for (int id = 0; id < static_cast<int>(formula_.size()); ++id) {
    const node& n = formula_.at(id);
    std::span<double> out = cache_.row(id);
    switch (n.kind) {
      case op::truth:
        std::fill(out.begin(), out.end(), 0.0);
        break;
      case op::falsity:
        break;  // already -inf
      case op::atom: {
        if (!atom_class_[id]) break;
        auto probs = trace_.probabilities(*atom_class_[id]);
        auto logs = trace_.log_scores(*atom_class_[id]);
        for (int j = 0; j < windows; ++j) {
          const int t = ctx.grid_time(j);
          out[j] = (ctx.w == 1 || t == ctx.t_e) ? logs[static_cast<std::size_t>(t - 1)] : smooth_window(probs, t, ctx.t_e, ctx.w);
        }
        break;
      }
      case op::negation: {
        auto a = cache_.row(n.left);
        for (int j = 0; j < windows; ++j) out[j] = log_complement(a[j]);
        break;
      }
      case op::conjunction: {
        auto a = cache_.row(n.left);
        auto b = cache_.row(n.right);
        for (int j = 0; j < windows; ++j) out[j] = a[j] + b[j];
        break;
      }
      case op::disjunction: {
        auto a = cache_.row(n.left);
        auto b = cache_.row(n.right);
        for (int j = 0; j < windows; ++j) out[j] = log_or(a[j], b[j]);
        break;
      }
      case op::next: {
        // Strong next: no successor window means -inf.
        auto a = cache_.row(n.left);
        for (std::size_t j = 0; j < last; ++j) out[j] = a[j + 1];
        out[last] = neg_infinity;
        break;
      }
      case op::always: {
        // □φ = φ ∧ ◯□φ with an empty suffix contributing log 1.
        auto a = cache_.row(n.left);
        out[last] = a[last];
        for (std::size_t j = last; j-- > 0;) out[j] = a[j] + out[j + 1];
        break;
      }
      case op::eventually: {
        // ◇φ = ¬□¬φ. At the final window this is ¬¬φ, returned as φ.
        auto a = cache_.row(n.left);
        scratch_.assign(static_cast<std::size_t>(windows), 0.0);
        scratch_[last] = log_complement(a[last]);
        out[last] = a[last];
        for (std::size_t j = last; j-- > 0;) {
          scratch_[j] = log_complement(a[j]) + scratch_[j + 1];
          out[j] = log_complement(scratch_[j]);
        }
        break;
      }
      case op::until: {
        // φ1 U φ2 = φ2 ∨ (φ1 ∧ ¬φ2 ∧ ◯(φ1 U φ2)).
        auto a = cache_.row(n.left);
        auto b = cache_.row(n.right);
        out[last] = b[last];
        for (std::size_t j = last; j-- > 0;) {
          const double hold = a[j] + log_complement(b[j]) + out[j + 1];
          out[j] = log_or(b[j], hold);
        }
        break;
      }
    }
  }
  return cache_.row(formula_.root());
}

std::vector<start_score> logstop_scorer::all_starts(const eval_context& ctx) {
  auto root = evaluate(ctx);
  std::vector<start_score> out;
  out.reserve(root.size());
  for (std::size_t j = 0; j < root.size(); ++j) out.push_back({ctx.grid_time(static_cast<int>(j)), root[j]});
  return out;
}

double logstop(const score_trace& trace, const formula& f, int t_s, int t_e, int w) {
  logstop_scorer scorer(trace, f);
  return scorer.score({t_s, t_e, w});
}

std::vector<start_score> logstop_all_starts(const score_trace& trace, const formula& f, int anchor, int t_e, int w) {
  logstop_scorer scorer(trace, f);
  return scorer.all_starts({anchor, t_e, w});
}

}  // namespace tempo
