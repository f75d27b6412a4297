#include "tempo/matching.hpp"

#include <algorithm>
#include <charconv>
#include <map>

#include "tempo/engine.hpp"
#include "tempo/error.hpp"

namespace tempo {

semantics parse_semantics(std::string_view text) {
  if (text == "logstop") return semantics::logstop;
  if (text == "stl") return semantics::stl;
  throw contract_error("semantics must be 'logstop' or 'stl'");
}

threshold_mode parse_threshold_mode(std::string_view text) {
  if (text == "adaptive") return threshold_mode::adaptive;
  if (text == "fixed") return threshold_mode::fixed;
  throw contract_error("threshold must be 'adaptive' or 'fixed'");
}

std::string_view to_string(semantics s) noexcept { return s == semantics::logstop ? "logstop" : "stl"; }
std::string_view to_string(threshold_mode m) noexcept { return m == threshold_mode::adaptive ? "adaptive" : "fixed"; }

window_policy window_policy::of(int w) {
  if (w < 1) throw contract_error("window must be >= 1");
  return {w};
}

window_policy window_policy::parse(std::string_view text) {
  if (text == "auto") return automatic();
  int w = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), w);
  if (ec != std::errc{} || ptr != text.data() + text.size()) throw contract_error("window must be 'auto' or a positive integer");
  return of(w);
}

int window_policy::resolve(int length) const {
  const int w = fixed > 0 ? fixed : (length < 20 ? 2 : 5);
  return std::max(1, std::min(w, length));
}

double adaptive_threshold(const formula& f, int length, int w) {
  if (length < 1) throw contract_error("sequence length must be >= 1");
  std::map<std::string, std::vector<double>> columns;
  for (const auto& name : f.atoms()) columns.emplace(name, std::vector<double>(static_cast<std::size_t>(length), 0.5));
  if (columns.empty()) columns.emplace("_", std::vector<double>(static_cast<std::size_t>(length), 0.5));
  const score_trace chance = score_trace::from_probabilities("chance", columns);
  return std::min(log_half, logstop(chance, f, 1, length, w));
}

match_result query_match(const score_trace& trace, const formula& f, const match_options& options) {
  match_result result;
  result.id = trace.id();
  result.scoring = options.scoring;
  result.window = options.window.resolve(trace.length());
  if (options.scoring == semantics::stl) {
    result.score = stl_robustness_window(trace, f, 1, trace.length(), result.window, options.stl);
    result.threshold = 0.0;
  } else {
    result.score = logstop(trace, f, 1, trace.length(), result.window);
    result.threshold = options.threshold == threshold_mode::adaptive ? adaptive_threshold(f, trace.length(), result.window) : log_half;
  }
  result.matched = result.score > result.threshold;
  return result;
}

}  // namespace tempo
