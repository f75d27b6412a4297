#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "tempo/formula.hpp"
#include "tempo/robustness.hpp"
#include "tempo/trace.hpp"

namespace tempo {

enum class semantics : std::uint8_t { logstop, stl };
enum class threshold_mode : std::uint8_t { adaptive, fixed };

semantics parse_semantics(std::string_view text);
threshold_mode parse_threshold_mode(std::string_view text);
std::string_view to_string(semantics s) noexcept;
std::string_view to_string(threshold_mode m) noexcept;

/// Either an explicit window length or the length-based heuristic
/// (2 below 20 timesteps, 5 otherwise).
struct window_policy {
  int fixed = 0;  // 0 selects the heuristic

  static window_policy automatic() { return {}; }
  static window_policy of(int w);
  static window_policy parse(std::string_view text);

  /// Window for a sequence of `length` timesteps, never longer than it.
  int resolve(int length) const;
};

struct match_options {
  window_policy window = window_policy::automatic();
  threshold_mode threshold = threshold_mode::adaptive;
  semantics scoring = semantics::logstop;
  robustness_params stl{};
};

struct match_result {
  std::string id;
  double score = 0.0;
  double threshold = 0.0;
  bool matched = false;
  int window = 1;
  semantics scoring = semantics::logstop;
};

/// log 0.5
inline constexpr double log_half = -0.69314718055994530942;

/// min(log 0.5, LogSTOP of `f` on a length-T trace whose every atom scores
/// log 0.5 at every timestep). Depends only on (f, T, w).
double adaptive_threshold(const formula& f, int length, int w);

/// Scores the whole trace and compares against the threshold (strict >).
/// STL semantics uses the sign test robustness > 0.
match_result query_match(const score_trace& trace, const formula& f, const match_options& options = {});

}  // namespace tempo
