#pragma once

// Reference implementations used as independent oracles by the tests. They
// follow the definitions directly (plain recursion, no memo tables, no
// shared code with the library beyond the formula and trace containers).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "tempo/formula.hpp"
#include "tempo/trace.hpp"

namespace testing {

using tempo::formula;
using tempo::op;

inline constexpr double ninf = -std::numeric_limits<double>::infinity();

inline bool close(double a, double b, double tol = 1e-12) {
  if (a == b) return true;
  if (std::isinf(a) || std::isinf(b)) return false;
  return std::fabs(a - b) <= tol * std::max(1.0, std::max(std::fabs(a), std::fabs(b)));
}

// ---------------------------------------------------------------------------
// Boolean semantics, quantifiers written out literally.

inline bool naive_bool(const tempo::label_trace& lt, const formula& f, int id, int t, int last) {
  const auto& n = f.at(id);
  switch (n.kind) {
    case op::truth: return true;
    case op::falsity: return false;
    case op::atom: return lt.class_index(n.name) && lt.label(t, n.name);
    case op::negation: return !naive_bool(lt, f, n.left, t, last);
    case op::conjunction: return naive_bool(lt, f, n.left, t, last) && naive_bool(lt, f, n.right, t, last);
    case op::disjunction: return naive_bool(lt, f, n.left, t, last) || naive_bool(lt, f, n.right, t, last);
    case op::next: return t < last && naive_bool(lt, f, n.left, t + 1, last);
    case op::always:
      for (int u = t; u <= last; ++u)
        if (!naive_bool(lt, f, n.left, u, last)) return false;
      return true;
    case op::eventually:
      for (int u = t; u <= last; ++u)
        if (naive_bool(lt, f, n.left, u, last)) return true;
      return false;
    case op::until:
      for (int u = t; u <= last; ++u) {
        if (!naive_bool(lt, f, n.right, u, last)) continue;
        bool prefix = true;
        for (int v = t; v < u && prefix; ++v) prefix = naive_bool(lt, f, n.left, v, last);
        if (prefix) return true;
      }
      return false;
  }
  return false;
}

inline bool naive_bool(const tempo::label_trace& lt, const formula& f, int t, int last) { return naive_bool(lt, f, f.root(), t, last); }

// ---------------------------------------------------------------------------
// LogSTOP, cache-free recursion on the grid t_s, t_s + w, ... <= t_e.

struct ref_logstop {
  const tempo::score_trace& trace;
  const formula& f;
  int t_e;
  int w;

  static double complement(double s) {
    if (s == 0.0) return ninf;
    if (s == ninf) return 0.0;
    const long double x = s;
    return static_cast<double>(x > -0.6931471805599453L ? std::log(-std::expm1(x)) : std::log1p(-std::exp(x)));
  }

  double atom(const std::string& name, int t) const {
    auto idx = trace.class_index(name);
    if (!idx) return ninf;
    auto probs = trace.probabilities(*idx);
    const int last = std::min(t + w - 1, t_e);
    long double sum = 0;
    for (int u = t; u <= last; ++u) sum += probs[static_cast<std::size_t>(u - 1)];
    return static_cast<double>(std::log(sum / (last - t + 1)));
  }

  double always_neg(int child, int t) const {
    const double here = complement(eval(child, t));
    return here + (t + w <= t_e ? always_neg(child, t + w) : 0.0);
  }

  double eval(int id, int t) const {
    const auto& n = f.at(id);
    switch (n.kind) {
      case op::truth: return 0.0;
      case op::falsity: return ninf;
      case op::atom: return atom(n.name, t);
      case op::negation: return complement(eval(n.left, t));
      case op::conjunction: return eval(n.left, t) + eval(n.right, t);
      case op::disjunction: return complement(complement(eval(n.left, t)) + complement(eval(n.right, t)));
      case op::next: return t + w <= t_e ? eval(n.left, t + w) : ninf;
      case op::always: return eval(n.left, t) + (t + w <= t_e ? eval(id, t + w) : 0.0);
      case op::eventually: return complement(always_neg(n.left, t));
      case op::until: {
        const double a = eval(n.left, t), b = eval(n.right, t);
        const double rest = t + w <= t_e ? eval(id, t + w) : ninf;
        return complement(complement(b) + complement(a + complement(b) + rest));
      }
    }
    return ninf;
  }

  double operator()(int t_s) const { return eval(f.root(), t_s); }
};

inline double reference_logstop(const tempo::score_trace& trace, const formula& f, int t_s, int t_e, int w) {
  return ref_logstop{trace, f, t_e, w}(t_s);
}

// ---------------------------------------------------------------------------
// STL space robustness by its definition (O(T^2) Until) over the same grid.

struct ref_robustness {
  const tempo::score_trace& trace;
  const formula& f;
  int t_e;
  int w;
  double tau;

  double top() const { return 1.0 - tau; }

  double atom(const std::string& name, int t) const {
    auto idx = trace.class_index(name);
    if (!idx) return -tau;
    auto probs = trace.probabilities(*idx);
    const int last = std::min(t + w - 1, t_e);
    long double sum = 0;
    for (int u = t; u <= last; ++u) sum += probs[static_cast<std::size_t>(u - 1)];
    return static_cast<double>(sum / (last - t + 1)) - tau;
  }

  double eval(int id, int t) const {
    const auto& n = f.at(id);
    switch (n.kind) {
      case op::truth: return top();
      case op::falsity: return -top();
      case op::atom: return atom(n.name, t);
      case op::negation: return -eval(n.left, t);
      case op::conjunction: return std::min(eval(n.left, t), eval(n.right, t));
      case op::disjunction: return std::max(eval(n.left, t), eval(n.right, t));
      case op::next: return t + w <= t_e ? eval(n.left, t + w) : -top();
      case op::always: {
        double r = std::numeric_limits<double>::infinity();
        for (int u = t; u <= t_e; u += w) r = std::min(r, eval(n.left, u));
        return r;
      }
      case op::eventually: {
        double r = -std::numeric_limits<double>::infinity();
        for (int u = t; u <= t_e; u += w) r = std::max(r, eval(n.left, u));
        return r;
      }
      case op::until: {
        double best = -std::numeric_limits<double>::infinity();
        for (int u = t; u <= t_e; u += w) {
          double prefix = top();
          for (int v = t; v < u; v += w) prefix = std::min(prefix, eval(n.left, v));
          best = std::max(best, std::min(eval(n.right, u), prefix));
        }
        return best;
      }
    }
    return 0.0;
  }
};

inline double reference_robustness(const tempo::score_trace& trace, const formula& f, int t_s, int t_e, int w, double tau = 0.5) {
  return ref_robustness{trace, f, t_e, w, tau}.eval(f.root(), t_s);
}

// ---------------------------------------------------------------------------
// Random instances

inline formula random_formula(std::mt19937_64& gen, const std::vector<std::string>& atoms, int depth) {
  std::uniform_int_distribution<int> pick_atom(0, static_cast<int>(atoms.size()) - 1);
  if (depth == 0) {
    const int r = static_cast<int>(gen() % 20);
    if (r == 0) return formula::top();
    if (r == 1) return formula::bottom();
    return formula::atom(atoms[static_cast<std::size_t>(pick_atom(gen))]);
  }
  switch (gen() % 9) {
    case 0: return formula::atom(atoms[static_cast<std::size_t>(pick_atom(gen))]);
    case 1: return !random_formula(gen, atoms, depth - 1);
    case 2: return random_formula(gen, atoms, depth - 1) & random_formula(gen, atoms, depth - 1);
    case 3: return random_formula(gen, atoms, depth - 1) | random_formula(gen, atoms, depth - 1);
    case 4: return tempo::next(random_formula(gen, atoms, depth - 1));
    case 5: return tempo::always(random_formula(gen, atoms, depth - 1));
    case 6: return tempo::eventually(random_formula(gen, atoms, depth - 1));
    default: return tempo::until(random_formula(gen, atoms, depth - 1), random_formula(gen, atoms, depth - 1));
  }
}

inline tempo::label_trace labels_from_bits(const std::vector<std::string>& classes, int length, std::uint64_t bits) {
  std::map<std::string, std::vector<int>> cols;
  for (std::size_t c = 0; c < classes.size(); ++c) {
    auto& col = cols[classes[c]];
    for (int t = 0; t < length; ++t) col.push_back(static_cast<int>((bits >> (c * static_cast<std::size_t>(length) + static_cast<std::size_t>(t))) & 1u));
  }
  return tempo::label_trace::from_columns("bits", cols);
}

inline tempo::label_trace random_labels(std::mt19937_64& gen, const std::vector<std::string>& classes, int length, double density = 0.5) {
  std::bernoulli_distribution coin(density);
  std::map<std::string, std::vector<int>> cols;
  for (const auto& c : classes) {
    auto& col = cols[c];
    for (int t = 0; t < length; ++t) col.push_back(coin(gen) ? 1 : 0);
  }
  return tempo::label_trace::from_columns("random", cols);
}

/// Scores 1 - eps where the label is 1 and eps elsewhere.
inline tempo::score_trace crisp_scores(const tempo::label_trace& lt, double eps = 1e-9) {
  std::map<std::string, std::vector<double>> cols;
  for (std::size_t c = 0; c < lt.classes().size(); ++c) {
    auto& col = cols[lt.classes()[c]];
    for (auto v : lt.column(c)) col.push_back(v ? 1.0 - eps : eps);
  }
  return tempo::score_trace::from_probabilities(lt.id(), cols);
}

inline tempo::score_trace random_scores(std::mt19937_64& gen, const std::vector<std::string>& classes, int length,
                                        std::string id = "random") {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::map<std::string, std::vector<double>> cols;
  for (const auto& c : classes) {
    auto& col = cols[c];
    for (int t = 0; t < length; ++t) {
      const double r = u(gen);
      // Occasional exact 0 and 1 exercise the infinite and zero log scores.
      col.push_back(r < 0.05 ? 0.0 : r > 0.95 ? 1.0 : u(gen));
    }
  }
  return tempo::score_trace::from_probabilities(std::move(id), cols);
}

inline tempo::score_trace constant_trace(const std::string& cls, double p, int length, std::string id = "const") {
  return tempo::score_trace::from_probabilities(std::move(id), {{cls, std::vector<double>(static_cast<std::size_t>(length), p)}});
}

}  // namespace testing
