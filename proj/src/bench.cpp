#include "tempo/bench.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "json.hpp"
#include "tempo/error.hpp"
#include "tempo/oracle.hpp"
#include "tempo/parallel.hpp"

namespace tempo {

std::string_view to_string(template_category c) noexcept {
  switch (c) {
    case template_category::simple: return "simple";
    case template_category::boolean_over_temporal: return "boolean-over-temporal";
    case template_category::temporal_over_boolean: return "temporal-over-boolean";
    case template_category::temporal_over_temporal: return "temporal-over-temporal";
    case template_category::mixed: return "mixed";
    case template_category::custom: return "custom";
  }
  return "custom";
}

namespace {

bool is_placeholder(const std::string& name) {
  return name.size() >= 2 && name[0] == 'p' && std::all_of(name.begin() + 1, name.end(), [](char c) { return c >= '0' && c <= '9'; });
}

query_template make_template(std::string name, std::string skeleton, template_category category) {
  formula shape = parse_formula(skeleton);
  return query_template{std::move(name), std::move(skeleton), category, std::move(shape)};
}

// Ordered selections of k distinct items.
void permutations(const std::vector<std::string>& items, std::size_t k, std::vector<std::string>& current, std::vector<bool>& used,
                  std::vector<std::vector<std::string>>& out) {
  if (current.size() == k) {
    out.push_back(current);
    return;
  }
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    current.push_back(items[i]);
    permutations(items, k, current, used, out);
    current.pop_back();
    used[i] = false;
  }
}

std::vector<std::vector<std::string>> assignments(const std::vector<std::string>& classes, std::size_t k) {
  std::vector<std::vector<std::string>> out;
  if (classes.size() < k) return out;
  std::vector<std::string> current;
  std::vector<bool> used(classes.size(), false);
  permutations(classes, k, current, used, out);
  return out;
}

// Shuffles each trace's candidates and deals them round-robin over traces
// (in trace order) until `count` are taken.
std::vector<qm_sample> stratified_take(std::vector<std::vector<qm_sample>> by_trace, std::size_t count, rng& random) {
  for (auto& group : by_trace) random.shuffle(group);
  std::vector<qm_sample> out;
  std::size_t round = 0;
  while (out.size() < count) {
    bool any = false;
    for (auto& group : by_trace) {
      if (round < group.size()) {
        any = true;
        out.push_back(group[round]);
        if (out.size() == count) break;
      }
    }
    if (!any) break;
    ++round;
  }
  return out;
}

}  // namespace

std::vector<std::string> query_template::placeholders() const {
  std::vector<std::string> out;
  for (const auto& a : shape.atoms()) {
    if (is_placeholder(a)) out.push_back(a);
  }
  std::sort(out.begin(), out.end(), [](const std::string& a, const std::string& b) {
    return std::stoul(a.substr(1)) < std::stoul(b.substr(1));
  });
  return out;
}

formula query_template::instantiate(std::span<const std::string> classes) const {
  const auto names = placeholders();
  if (classes.size() != names.size()) {
    throw contract_error("template '" + name + "' takes " + std::to_string(names.size()) + " classes, got " + std::to_string(classes.size()));
  }
  std::map<std::string, std::string> mapping;
  for (std::size_t i = 0; i < names.size(); ++i) mapping.emplace(names[i], classes[i]);
  return shape.rename_atoms([&](const std::string& atom) {
    auto it = mapping.find(atom);
    return it == mapping.end() ? std::string{} : it->second;
  });
}

const std::vector<query_template>& template_catalog() {
  static const std::vector<query_template> catalog = [] {
    using c = template_category;
    return std::vector<query_template>{
        make_template("eventually", "F p1", c::simple),
        make_template("always", "G p1", c::simple),
        make_template("until", "p1 U p2", c::simple),
        make_template("always_and_eventually", "G p1 & F p2", c::boolean_over_temporal),
        make_template("always_or_eventually", "G p1 | F p2", c::boolean_over_temporal),
        make_template("not_until", "!p1 U p2", c::temporal_over_boolean),
        make_template("until_not", "p1 U !p2", c::temporal_over_boolean),
        make_template("always_and", "G (p1 & p2)", c::temporal_over_boolean),
        make_template("and_until", "(p1 & p2) U p3", c::temporal_over_boolean),
        make_template("until_always", "p1 U G p2", c::temporal_over_temporal),
        make_template("eventually_always", "F G p1", c::temporal_over_temporal),
        make_template("always_eventually", "G F p1", c::temporal_over_temporal),
        make_template("not_until_eventually", "!p1 U F p2", c::mixed),
        make_template("not_until_always", "!p1 U G p2", c::mixed),
        make_template("and_until_eventually", "(p1 & p2) U F p3", c::mixed),
    };
  }();
  return catalog;
}

query_template resolve_template(std::string_view name_or_formula) {
  for (const auto& t : template_catalog()) {
    if (t.name == name_or_formula) return t;
  }
  return make_template(std::string(name_or_formula), std::string(name_or_formula), template_category::custom);
}

// ---------------------------------------------------------------------------
// rng

double rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::size_t rng::below(std::size_t n) {
  if (n == 0) throw contract_error("rng::below(0)");
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return static_cast<std::size_t>(x % bound);
}

double rng::gaussian() {
  if (spare_) {
    const double v = *spare_;
    spare_.reset();
    return v;
  }
  double u1;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  return radius * std::cos(angle);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// ---------------------------------------------------------------------------
// QM samples

qm_generation generate_qm_samples(std::span<const label_trace> labels, const query_template& tmpl, int length, std::size_t cap,
                                  std::uint64_t seed) {
  if (length < 1) throw contract_error("sample length must be >= 1");
  const std::size_t k = tmpl.arity();

  std::vector<const label_trace*> ordered;
  for (const auto& t : labels) ordered.push_back(&t);
  std::sort(ordered.begin(), ordered.end(), [](const label_trace* a, const label_trace* b) { return a->id() < b->id(); });

  std::vector<std::vector<qm_sample>> matching(ordered.size()), non_matching(ordered.size());
  parallel_for(ordered.size(), [&](std::size_t i) {
    const label_trace& trace = *ordered[i];
    if (trace.length() < length) return;
    for (const auto& assignment : assignments(trace.expressed_classes(), k)) {
      const formula f = tmpl.instantiate(assignment);
      const std::string text = format_formula(f);
      for (int start = 1; start + length - 1 <= trace.length(); ++start) {
        const int end = start + length - 1;
        const bool label = eval_boolean_span(trace, f, start, end);
        (label ? matching : non_matching)[i].push_back(qm_sample{trace.id(), {start, end}, text, label, tmpl.name});
      }
    }
  });

  qm_generation result;
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    result.pool_matching += matching[i].size();
    result.pool_non_matching += non_matching[i].size();
  }
  if (result.pool_matching + result.pool_non_matching == 0) {
    throw data_error("no candidates for template '" + tmpl.name + "': needs " + std::to_string(k) +
                     " distinct expressed classes and traces of length >= " + std::to_string(length));
  }

  const std::size_t take_matching = std::min(result.pool_matching, cap - std::min(result.pool_non_matching, cap / 2));
  const std::size_t take_non_matching = std::min(result.pool_non_matching, cap - take_matching);

  rng random(seed);
  auto pos = stratified_take(std::move(matching), take_matching, random);
  auto neg = stratified_take(std::move(non_matching), take_non_matching, random);
  result.emitted_matching = pos.size();
  result.emitted_non_matching = neg.size();
  result.samples = std::move(pos);
  result.samples.insert(result.samples.end(), std::make_move_iterator(neg.begin()), std::make_move_iterator(neg.end()));
  std::sort(result.samples.begin(), result.samples.end(), [](const qm_sample& a, const qm_sample& b) {
    if (a.trace != b.trace) return a.trace < b.trace;
    if (a.span.start != b.span.start) return a.span.start < b.span.start;
    return a.query < b.query;
  });
  return result;
}

std::vector<std::size_t> verify_qm_samples(std::span<const label_trace> labels, std::span<const qm_sample> samples) {
  std::map<std::string, const label_trace*> by_id;
  for (const auto& t : labels) by_id.emplace(t.id(), &t);
  std::vector<std::size_t> bad;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    auto it = by_id.find(s.trace);
    if (it == by_id.end() || s.span.end > it->second->length() ||
        eval_boolean_span(*it->second, parse_formula(s.query), s.span.start, s.span.end) != s.label) {
      bad.push_back(i);
    }
  }
  return bad;
}

// ---------------------------------------------------------------------------
// Retrieval ground truth

bool has_satisfying_span(const label_trace& labels, const formula& f, int min_length, int max_length) {
  if (min_length < 1 || min_length > max_length) throw contract_error("event lengths must satisfy 1 <= tlo <= thi");
  for (int end = min_length; end <= labels.length(); ++end) {
    const int first = std::max(1, end - max_length + 1);
    const auto truth = eval_boolean_suffixes(labels, f, first, end);
    for (int start = first; end - start + 1 >= min_length; ++start) {
      if (truth[static_cast<std::size_t>(start - first)]) return true;
    }
  }
  return false;
}

retrieval_truth_set generate_retrieval_ground_truth(std::span<const label_trace> labels, std::span<const formula> queries,
                                                    int min_length, int max_length, std::size_t max_relevant) {
  std::vector<retrieval_truth> all(queries.size());
  parallel_for(queries.size(), [&](std::size_t q) {
    all[q].query = queries[q];
    for (const auto& trace : labels) {
      if (has_satisfying_span(trace, queries[q], min_length, max_length)) all[q].relevant.insert(trace.id());
    }
  });
  retrieval_truth_set out;
  for (auto& truth : all) {
    const bool keep = !truth.relevant.empty() && truth.relevant.size() <= max_relevant;
    (keep ? out.kept : out.dropped).push_back(std::move(truth));
  }
  return out;
}

retrieval_truth_set generate_retrieval_queries(std::span<const label_trace> labels, int min_length, int max_length,
                                               std::size_t max_relevant, std::size_t per_template_cap, std::uint64_t seed) {
  std::set<std::string> expressed;
  for (const auto& t : labels) {
    for (auto& c : t.expressed_classes()) expressed.insert(std::move(c));
  }
  const std::vector<std::string> classes(expressed.begin(), expressed.end());

  retrieval_truth_set out;
  rng random(seed);
  for (const auto& tmpl : template_catalog()) {
    std::vector<formula> candidates;
    for (const auto& a : assignments(classes, tmpl.arity())) candidates.push_back(tmpl.instantiate(a));
    auto truth = generate_retrieval_ground_truth(labels, candidates, min_length, max_length, max_relevant);
    for (auto& t : truth.kept) t.template_name = tmpl.name;
    for (auto& t : truth.dropped) t.template_name = tmpl.name;
    random.shuffle(truth.kept);
    if (truth.kept.size() > per_template_cap) {
      for (std::size_t i = per_template_cap; i < truth.kept.size(); ++i) out.dropped.push_back(std::move(truth.kept[i]));
      truth.kept.resize(per_template_cap);
    }
    std::sort(truth.kept.begin(), truth.kept.end(),
              [](const retrieval_truth& a, const retrieval_truth& b) { return format_formula(a.query) < format_formula(b.query); });
    for (auto& t : truth.kept) out.kept.push_back(std::move(t));
    for (auto& t : truth.dropped) out.dropped.push_back(std::move(t));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Synthetic traces

void synth_spec::validate() const {
  if (id.empty()) throw data_error("synthetic trace needs an id");
  if (length < 1) throw data_error("synthetic trace '" + id + "' needs length >= 1");
  if (classes.empty()) throw data_error("synthetic trace '" + id + "' needs at least one class");
  if (!(noise >= 0.0)) throw data_error("noise must be >= 0");
  if (!(flip >= 0.0 && flip <= 1.0)) throw data_error("flip probability must lie in [0, 1]");
  if (!(high >= 0.0 && high <= 1.0 && low >= 0.0 && low <= 1.0)) throw data_error("base probabilities must lie in [0, 1]");
  for (const auto& s : segments) {
    if (std::find(classes.begin(), classes.end(), s.cls) == classes.end()) throw data_error("segment class '" + s.cls + "' is not listed");
    if (s.start < 1 || s.start > s.end || s.end > length) {
      throw data_error("segment [" + std::to_string(s.start) + ", " + std::to_string(s.end) + "] outside [1, " + std::to_string(length) + "]");
    }
  }
}

synth_result synth_trace(const synth_spec& spec, std::uint64_t seed) {
  spec.validate();
  std::map<std::string, std::vector<int>> label_columns;
  for (const auto& c : spec.classes) label_columns[c].assign(static_cast<std::size_t>(spec.length), 0);
  for (const auto& s : spec.segments) {
    auto& col = label_columns[s.cls];
    for (int t = s.start; t <= s.end; ++t) col[static_cast<std::size_t>(t - 1)] = s.high ? 1 : 0;
  }

  rng random(seed);
  std::map<std::string, std::vector<double>> score_columns;
  for (const auto& [name, col] : label_columns) {
    std::vector<double> probs(col.size());
    for (std::size_t i = 0; i < col.size(); ++i) {
      bool positive = col[i] != 0;
      if (spec.flip > 0.0 && random.bernoulli(spec.flip)) positive = !positive;
      double p = positive ? spec.high : spec.low;
      if (spec.noise > 0.0) p = std::clamp(p + spec.noise * random.gaussian(), 0.0, 1.0);
      probs[i] = p;
    }
    score_columns.emplace(name, std::move(probs));
  }
  return {score_trace::from_probabilities(spec.id, score_columns), label_trace::from_columns(spec.id, label_columns)};
}

std::vector<synth_spec> parse_synth_specs(std::string_view json_text, std::uint64_t seed) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw data_error(std::string("invalid synth spec: ") + e.what());
  }
  auto read_one = [](const json& j, std::size_t index) {
    synth_spec s;
    try {
      s.id = j.value("id", "synth" + std::to_string(index));
      s.length = j.contains("T") ? j.at("T").get<int>() : j.at("length").get<int>();
      s.classes = j.at("classes").get<std::vector<std::string>>();
      s.noise = j.value("noise", 0.0);
      s.flip = j.value("flip", 0.0);
      s.high = j.value("high", 0.9);
      s.low = j.value("low", 0.1);
      for (const auto& seg : j.value("segments", json::array())) {
        const std::string level = seg.value("level", "high");
        if (level != "high" && level != "low") throw data_error("segment level must be 'high' or 'low'");
        s.segments.push_back({seg.at("class").get<std::string>(), seg.at("start").get<int>(), seg.at("end").get<int>(), level == "high"});
      }
    } catch (const json::exception& e) {
      throw data_error(std::string("invalid synth spec: ") + e.what());
    }
    s.validate();
    return s;
  };
  std::vector<synth_spec> out;
  if (doc.is_object() && doc.contains("planted")) {
    const json& p = doc.at("planted");
    planted_corpus_options o;
    try {
      o.traces = p.value("traces", o.traces);
      o.planted = p.value("planted", o.planted);
      o.length = p.value("length", o.length);
      o.hold = p.value("hold", o.hold);
      o.hit = p.value("hit", o.hit);
      o.noise = p.value("noise", o.noise);
      o.flip = p.value("flip", o.flip);
    } catch (const json::exception& e) {
      throw data_error(std::string("invalid planted corpus spec: ") + e.what());
    }
    try {
      out = planted_until_corpus(o, seed);
    } catch (const contract_error& e) {
      throw data_error(std::string("invalid planted corpus spec: ") + e.what());
    }
  } else if (doc.is_object() && doc.contains("traces")) {
    std::size_t i = 0;
    for (const auto& j : doc.at("traces")) out.push_back(read_one(j, i++));
  } else if (doc.is_object()) {
    out.push_back(read_one(doc, 0));
  } else {
    throw data_error("synth spec must be a JSON object");
  }
  if (out.empty()) throw data_error("synth spec lists no traces");
  return out;
}

std::vector<synth_spec> planted_until_corpus(const planted_corpus_options& o, std::uint64_t seed) {
  if (o.planted < 0 || o.planted > o.traces) throw contract_error("planted count must lie in [0, traces]");
  if (o.hold < 1 || o.hit < 1 || o.hold + o.hit > o.length) throw contract_error("planted event does not fit the trace length");
  rng random(seed);
  std::vector<int> order(static_cast<std::size_t>(o.traces));
  for (int i = 0; i < o.traces; ++i) order[static_cast<std::size_t>(i)] = i;
  random.shuffle(order);
  std::vector<bool> planted(static_cast<std::size_t>(o.traces), false);
  for (int i = 0; i < o.planted; ++i) planted[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = true;

  const int width = o.traces > 1 ? static_cast<int>(std::to_string(o.traces - 1).size()) : 1;
  std::vector<synth_spec> out;
  for (int i = 0; i < o.traces; ++i) {
    synth_spec s;
    std::string num = std::to_string(i);
    s.id = "trace" + std::string(static_cast<std::size_t>(std::max(0, width - static_cast<int>(num.size()))), '0') + num;
    s.length = o.length;
    s.classes = {"p1", "p2"};
    s.noise = o.noise;
    s.flip = o.flip;
    if (planted[static_cast<std::size_t>(i)]) {
      const int start = 1 + static_cast<int>(random.below(static_cast<std::size_t>(o.length - o.hold - o.hit + 1)));
      s.segments.push_back({"p1", start, start + o.hold - 1, true});
      s.segments.push_back({"p2", start + o.hold, start + o.hold + o.hit - 1, true});
    } else {
      const int start = 1 + static_cast<int>(random.below(static_cast<std::size_t>(o.length - o.hold + 1)));
      s.segments.push_back({"p1", start, start + o.hold - 1, true});
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace tempo
