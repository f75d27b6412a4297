#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tempo/formula.hpp"
#include "tempo/retrieval.hpp"
#include "tempo/trace.hpp"

namespace tempo {

// ---------------------------------------------------------------------------
// Query templates

enum class template_category : std::uint8_t {
  simple,
  boolean_over_temporal,
  temporal_over_boolean,
  temporal_over_temporal,
  mixed,
  custom,
};

std::string_view to_string(template_category c) noexcept;

/// Formula skeleton over placeholders p1, p2, p3.
struct query_template {
  std::string name;
  std::string skeleton;
  template_category category = template_category::custom;
  formula shape;

  /// Placeholder names used by the skeleton, sorted (p1, p2, ...).
  std::vector<std::string> placeholders() const;
  std::size_t arity() const { return placeholders().size(); }

  /// Substitutes classes[i] for the i-th placeholder.
  formula instantiate(std::span<const std::string> classes) const;
};

/// The fifteen evaluation templates in five categories of increasing nesting.
const std::vector<query_template>& template_catalog();

/// Catalog lookup by name; otherwise parses `name_or_formula` as a custom
/// skeleton.
query_template resolve_template(std::string_view name_or_formula);

// ---------------------------------------------------------------------------
// Deterministic randomness. Only raw engine output is used so sequences are
// identical across standard libraries.

class rng {
 public:
  explicit rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double uniform();                    // [0, 1)
  std::size_t below(std::size_t n);    // [0, n), unbiased
  double gaussian();                   // standard normal
  bool bernoulli(double p) { return uniform() < p; }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

// ---------------------------------------------------------------------------
// Query-matching samples

struct qm_sample {
  std::string trace;
  time_span span;
  std::string query;     // canonical formula text
  bool label = false;    // true = matching
  std::string template_name;
};

struct qm_generation {
  std::vector<qm_sample> samples;
  std::size_t pool_matching = 0;
  std::size_t pool_non_matching = 0;
  std::size_t emitted_matching = 0;
  std::size_t emitted_non_matching = 0;

  bool balanced() const noexcept {
    const auto a = emitted_matching, b = emitted_non_matching;
    return (a > b ? a - b : b - a) <= 1;
  }
};

/// Slides fixed-length spans over every trace long enough, for every
/// assignment of distinct expressed classes to the template placeholders,
/// labels each span with the boolean oracle, then draws up to `cap` samples
/// split as evenly as the two pools allow. Sampling is without replacement
/// and round-robin across traces. Output is ordered by (trace, start, query).
qm_generation generate_qm_samples(std::span<const label_trace> labels, const query_template& tmpl, int length, std::size_t cap,
                                  std::uint64_t seed);

/// Re-evaluates every sample with the oracle; returns the indices that
/// disagree with their stored label.
std::vector<std::size_t> verify_qm_samples(std::span<const label_trace> labels, std::span<const qm_sample> samples);

// ---------------------------------------------------------------------------
// Retrieval ground truth

struct retrieval_truth {
  formula query;
  std::string template_name;
  std::set<std::string> relevant;
};

struct retrieval_truth_set {
  std::vector<retrieval_truth> kept;
  std::vector<retrieval_truth> dropped;  // empty or above max_relevant
};

/// True when some span of inclusive length in [min_length, max_length]
/// satisfies `f` at its start.
bool has_satisfying_span(const label_trace& labels, const formula& f, int min_length, int max_length);

/// Relevant sets per formula; queries with zero or more than `max_relevant`
/// relevant traces are dropped.
retrieval_truth_set generate_retrieval_ground_truth(std::span<const label_trace> labels, std::span<const formula> queries,
                                                    int min_length, int max_length, std::size_t max_relevant);

/// Instantiates every catalog template over the corpus' expressed classes,
/// keeps queries that pass the relevance filter, and samples at most
/// `per_template_cap` per template.
retrieval_truth_set generate_retrieval_queries(std::span<const label_trace> labels, int min_length, int max_length,
                                               std::size_t max_relevant, std::size_t per_template_cap, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Synthetic traces

struct synth_segment {
  std::string cls;
  int start = 1;
  int end = 1;
  bool high = true;
};

struct synth_spec {
  std::string id = "synth";
  int length = 1;
  std::vector<std::string> classes;
  std::vector<synth_segment> segments;
  double noise = 0.0;   // Gaussian sigma added to the base probability
  double flip = 0.0;    // per (timestep, class) chance of a label-inconsistent score
  double high = 0.9;
  double low = 0.1;

  void validate() const;
};

struct synth_result {
  score_trace scores;
  label_trace labels;
};

/// Labels follow the segments (later segments win); scores are the high or
/// low base for the label, swapped on a flip, plus clipped Gaussian noise.
synth_result synth_trace(const synth_spec& spec, std::uint64_t seed);

/// Parses one trace spec object, {"traces": [...]}, or {"planted": {...}}
/// (options of planted_until_corpus, expanded with `seed`).
std::vector<synth_spec> parse_synth_specs(std::string_view json_text, std::uint64_t seed = 0);

/// Per-trace seed derived from a corpus seed (splitmix64).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Corpus for "p1 U p2" retrieval: `planted` traces contain a p1 run of
/// `hold` steps followed by a p2 run of `hit` steps; the remaining traces
/// only carry p1 distractor runs and never express p2.
struct planted_corpus_options {
  int traces = 20;
  int planted = 5;
  int length = 100;
  int hold = 20;
  int hit = 10;
  double noise = 0.02;
  double flip = 0.0;
};

std::vector<synth_spec> planted_until_corpus(const planted_corpus_options& options, std::uint64_t seed);

}  // namespace tempo
