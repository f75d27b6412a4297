#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tempo {

enum class input_domain : std::uint8_t { probability, log };

/// Per-timestep, per-class detector scores for one sequence. Timesteps are
/// 1-based. Scores are kept both as probabilities and as their logs; a class
/// with no row at some timestep reads as probability 0.
class score_trace {
 public:
  score_trace() = default;

  /// Builds a trace from probability columns; every column must have the
  /// same length, and values must lie in [0, 1].
  static score_trace from_probabilities(std::string id, const std::map<std::string, std::vector<double>>& columns);

  /// Builds a trace from log-score columns; every value must be <= 0.
  static score_trace from_log_scores(std::string id, const std::map<std::string, std::vector<double>>& columns);

  const std::string& id() const noexcept { return id_; }
  int length() const noexcept { return length_; }
  const std::vector<std::string>& classes() const noexcept { return classes_; }

  /// Index of `name` in classes(), if present.
  std::optional<std::size_t> class_index(std::string_view name) const;

  /// Log score at (t, class); -inf for unknown classes.
  double log_score(int t, std::string_view name) const;
  double probability(int t, std::string_view name) const;

  /// Column views, indexed by t - 1.
  std::span<const double> probabilities(std::size_t class_idx) const { return probs_[class_idx]; }
  std::span<const double> log_scores(std::size_t class_idx) const { return logs_[class_idx]; }

  /// Copy of timesteps [start, end], renumbered from 1.
  score_trace slice(int start, int end) const;

 private:
  static score_trace assemble(std::string id, int length, std::vector<std::string> classes,
                              std::vector<std::vector<double>> probs, std::vector<std::vector<double>> logs);

  std::string id_;
  int length_ = 0;
  std::vector<std::string> classes_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<double>> probs_;
  std::vector<std::vector<double>> logs_;
};

/// Binary ground truth per (timestep, class); missing pairs read as 0.
class label_trace {
 public:
  label_trace() = default;

  static label_trace from_columns(std::string id, const std::map<std::string, std::vector<int>>& columns);

  const std::string& id() const noexcept { return id_; }
  int length() const noexcept { return length_; }
  const std::vector<std::string>& classes() const noexcept { return classes_; }
  std::optional<std::size_t> class_index(std::string_view name) const;

  bool label(int t, std::string_view name) const;
  std::span<const std::uint8_t> column(std::size_t class_idx) const { return labels_[class_idx]; }

  /// Classes with at least one positive timestep.
  std::vector<std::string> expressed_classes() const;

  label_trace slice(int start, int end) const;

  /// Thresholded estimate: label 1 where probability > tau.
  static label_trace from_scores(const score_trace& scores, double tau);

 private:
  std::string id_;
  int length_ = 0;
  std::vector<std::string> classes_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<std::uint8_t>> labels_;
};

/// Log of the mean probability of `class_idx` over the window
/// [t_s, min(t_s + w - 1, t_e)]. The caller guarantees 1 <= t_s <= t_e <= T.
double smooth_window(std::span<const double> probs, int t_s, int t_e, int w);

/// Checked form: validates the window and treats unknown classes as
/// probability 0 (returns -inf).
double smooth_atom(const score_trace& trace, std::string_view name, int t_s, int t_e, int w);

/// Probability (not log) mean over the same window as smooth_window.
double window_mean(std::span<const double> probs, int t_s, int t_e, int w);

// CSV ingestion. Score files have header `t,class,score`, label files
// `t,class,label`. The sequence id is the file stem.
score_trace load_score_trace(const std::filesystem::path& path, input_domain domain = input_domain::probability);
label_trace load_label_trace(const std::filesystem::path& path);

score_trace parse_score_csv(std::string_view text, std::string id, input_domain domain, const std::string& origin = {});
label_trace parse_label_csv(std::string_view text, std::string id, const std::string& origin = {});

/// Loads a directory of CSV files, ordered by id. When a `manifest.json` is
/// present (either a JSON array of ids or an object with an "ids" array) only
/// the listed ids are loaded.
std::vector<score_trace> load_score_db(const std::filesystem::path& dir, input_domain domain = input_domain::probability);
std::vector<label_trace> load_label_db(const std::filesystem::path& dir);

std::string write_score_csv(const score_trace& trace);
std::string write_label_csv(const label_trace& trace);

input_domain parse_input_domain(std::string_view text);

}  // namespace tempo
