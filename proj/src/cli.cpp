#include "tempo/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <cstdio>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "tempo/bench.hpp"
#include "tempo/engine.hpp"
#include "tempo/error.hpp"
#include "tempo/formula.hpp"
#include "tempo/matching.hpp"
#include "tempo/metrics.hpp"
#include "tempo/oracle.hpp"
#include "tempo/parallel.hpp"
#include "tempo/retrieval.hpp"
#include "tempo/robustness.hpp"
#include "tempo/trace.hpp"

namespace tempo::cli {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

// JSON has no infinities; -inf (probability 0) is written as null.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void emit(std::ostream& out, const json& j) { out << j.dump() << '\n'; }

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot open file", path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw data_error("cannot write file", path.string());
  out << text;
  if (!out) throw data_error("write failed", path.string());
}

// Reads a JSON-lines file; blank lines are skipped.
std::vector<std::pair<std::size_t, json>> read_jsonl(const fs::path& path) {
  std::vector<std::pair<std::size_t, json>> rows;
  std::istringstream in(read_text(path));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      rows.emplace_back(line_no, json::parse(line));
    } catch (const json::exception& e) {
      throw data_error(std::string("invalid JSON: ") + e.what(), path.string(), line_no);
    }
  }
  return rows;
}

formula parse_query_flag(const std::string& text) {
  try {
    return parse_formula(text);
  } catch (const parse_error& e) {
    throw contract_error(std::string("--query: ") + e.what());
  }
}

struct scoring_flags {
  std::string domain = "prob";
  std::string semantics_name = "logstop";
  double tau = 0.5;
  std::string window = "auto";

  void add_to(CLI::App* cmd, bool with_window = true) {
    cmd->add_option("--input-domain", domain, "Score file domain")->check(CLI::IsMember({"prob", "log"}))->capture_default_str();
    cmd->add_option("--semantics", semantics_name, "Scoring semantics")->check(CLI::IsMember({"logstop", "stl"}))->capture_default_str();
    cmd->add_option("--tau", tau, "Predicate threshold for stl semantics")->capture_default_str();
    if (with_window) cmd->add_option("--window", window, "Smoothing window: auto or a positive integer")->capture_default_str();
  }

  robustness_params stl() const {
    robustness_params p{tau};
    p.validate();
    return p;
  }
};

// ---------------------------------------------------------------------------

struct score_cmd {
  std::string trace, query;
  scoring_flags flags;
  std::optional<int> start, end;
  bool all_starts = false;

  void setup(CLI::App& app) {
    auto* cmd = app.add_subcommand("score", "Score one trace against a query");
    cmd->add_option("--trace", trace, "Score CSV")->required();
    cmd->add_option("--query", query, "Query formula")->required();
    flags.add_to(cmd);
    cmd->add_option("--start", start, "First timestep (default 1)");
    cmd->add_option("--end", end, "Last timestep (default T)");
    cmd->add_flag("--all-starts", all_starts, "Also print the score at every grid start");
  }

  int run(std::ostream& out) {
    const formula f = parse_query_flag(query);
    const window_policy policy = window_policy::parse(flags.window);
    const semantics sem = parse_semantics(flags.semantics_name);
    const robustness_params stl = flags.stl();
    const score_trace tr = load_score_trace(trace, parse_input_domain(flags.domain));

    const int t_s = start.value_or(1);
    const int t_e = end.value_or(tr.length());
    if (t_s < 1 || t_s > t_e || t_e > tr.length()) throw contract_error("--start/--end outside the trace");
    const eval_context ctx{t_s, t_e, policy.resolve(t_e - t_s + 1)};

    std::vector<double> scores;
    if (sem == semantics::stl) {
      robustness_scorer scorer(tr, f, stl);
      auto s = scorer.evaluate(ctx);
      scores.assign(s.begin(), s.end());
    } else {
      logstop_scorer scorer(tr, f);
      auto s = scorer.evaluate(ctx);
      scores.assign(s.begin(), s.end());
    }
    json head;
    head["id"] = tr.id();
    head["query"] = format_formula(f);
    head["semantics"] = std::string(to_string(sem));
    head["window"] = ctx.w;
    head["start"] = ctx.t_s;
    head["end"] = ctx.t_e;
    head["score"] = number(scores.front());
    emit(out, head);
    if (all_starts) {
      for (std::size_t j = 0; j < scores.size(); ++j) {
        json row;
        row["id"] = tr.id();
        row["t"] = ctx.grid_time(static_cast<int>(j));
        row["score"] = number(scores[j]);
        emit(out, row);
      }
    }
    return ok;
  }
};

json match_json(const match_result& r, const formula& f, threshold_mode mode) {
  json j;
  j["id"] = r.id;
  j["query"] = format_formula(f);
  j["score"] = number(r.score);
  j["threshold"] = number(r.threshold);
  j["matched"] = r.matched;
  j["window"] = r.window;
  j["semantics"] = std::string(to_string(r.scoring));
  if (r.scoring == semantics::logstop) j["threshold_mode"] = std::string(to_string(mode));
  return j;
}

struct match_cmd {
  std::string trace, db, query, threshold = "adaptive";
  scoring_flags flags;

  void setup(CLI::App& app) {
    auto* cmd = app.add_subcommand("match", "Decide whether traces match a query");
    auto* t = cmd->add_option("--trace", trace, "Score CSV");
    auto* d = cmd->add_option("--db", db, "Directory of score CSVs");
    t->excludes(d);
    cmd->add_option("--query", query, "Query formula")->required();
    cmd->add_option("--threshold", threshold, "adaptive or fixed (log 0.5)")->check(CLI::IsMember({"adaptive", "fixed"}))->capture_default_str();
    flags.add_to(cmd);
  }

  int run(std::ostream& out) {
    if (trace.empty() == db.empty()) throw contract_error("match needs exactly one of --trace or --db");
    const formula f = parse_query_flag(query);
    match_options options;
    options.window = window_policy::parse(flags.window);
    options.threshold = parse_threshold_mode(threshold);
    options.scoring = parse_semantics(flags.semantics_name);
    options.stl = flags.stl();
    const input_domain domain = parse_input_domain(flags.domain);

    std::vector<score_trace> traces;
    if (!trace.empty()) traces.push_back(load_score_trace(trace, domain));
    else traces = load_score_db(db, domain);

    std::vector<match_result> results(traces.size());
    parallel_for(traces.size(), [&](std::size_t i) { results[i] = query_match(traces[i], f, options); });
    for (const auto& r : results) emit(out, match_json(r, f, options.threshold));
    return ok;
  }
};

struct retrieve_cmd {
  std::string db, query;
  int tlo = 0, thi = 0, k = 10;
  scoring_flags flags;

  void setup(CLI::App& app) {
    auto* cmd = app.add_subcommand("retrieve", "Rank traces by their best matching subsequence");
    cmd->add_option("--db", db, "Directory of score CSVs")->required();
    cmd->add_option("--query", query, "Query formula")->required();
    cmd->add_option("--tlo", tlo, "Minimum event length (timesteps)")->required();
    cmd->add_option("--thi", thi, "Maximum event length (timesteps)")->required();
    cmd->add_option("--k", k, "Number of results")->capture_default_str();
    flags.window = "5";
    flags.add_to(cmd);
  }

  int run(std::ostream& out) {
    retrieval_query q;
    q.query = parse_query_flag(query);
    q.min_length = tlo;
    q.max_length = thi;
    q.k = k;
    q.window = window_policy::parse(flags.window).resolve(tlo);
    q.scoring = parse_semantics(flags.semantics_name);
    q.stl = flags.stl();
    q.validate();
    const auto traces = load_score_db(db, parse_input_domain(flags.domain));
    const ranked_list ranked = retrieve(traces, q);
    for (std::size_t i = 0; i < ranked.size(); ++i) {
      json j;
      j["rank"] = i + 1;
      j["id"] = ranked[i].id;
      j["score"] = number(ranked[i].score);
      j["span"] = ranked[i].best ? json::array({ranked[i].best->start, ranked[i].best->end}) : json(nullptr);
      emit(out, j);
    }
    return ok;
  }
};

struct oracle_cmd {
  std::string labels, query;
  std::optional<int> start, end;

  void setup(CLI::App& app) {
    auto* cmd = app.add_subcommand("oracle", "Boolean LTL truth on a label trace");
    cmd->add_option("--labels", labels, "Label CSV")->required();
    cmd->add_option("--query", query, "Query formula")->required();
    cmd->add_option("--start", start, "Evaluation timestep (default 1)");
    cmd->add_option("--end", end, "Truncate the trace at this timestep (default T)");
  }

  int run(std::ostream& out) {
    const formula f = parse_query_flag(query);
    const label_trace tr = load_label_trace(labels);
    const int s = start.value_or(1);
    const int e = end.value_or(tr.length());
    if (s < 1 || s > e || e > tr.length()) throw contract_error("--start/--end outside the trace");
    json j;
    j["id"] = tr.id();
    j["query"] = format_formula(f);
    j["start"] = s;
    j["end"] = e;
    j["value"] = eval_boolean_span(tr, f, s, e);
    emit(out, j);
    return ok;
  }
};

bool parse_sample_label(const json& v) {
  if (v.is_boolean()) return v.get<bool>();
  if (v.is_number_integer()) return v.get<int>() != 0;
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "matching") return true;
    if (s == "non-matching") return false;
  }
  throw data_error("label must be \"matching\", \"non-matching\" or a boolean");
}

std::string category_of(const std::string& template_name) {
  for (const auto& t : template_catalog()) {
    if (t.name == template_name) return std::string(to_string(t.category));
  }
  return std::string(to_string(template_category::custom));
}

json grouped_accuracy(const std::map<std::string, std::pair<std::map<std::string, bool>, std::map<std::string, bool>>>& groups) {
  json out = json::object();
  for (const auto& [name, pl] : groups) {
    json g;
    g["samples"] = pl.second.size();
    try {
      g["balanced_accuracy"] = balanced_accuracy(pl.first, pl.second);
    } catch (const data_error&) {
      g["balanced_accuracy"] = nullptr;  // only one label class present
    }
    out[name] = g;
  }
  return out;
}

struct eval_qm_cmd {
  std::string samples, scores, threshold = "adaptive", ablate;
  scoring_flags flags;
  bool per_sample = false;

  void setup(CLI::App& app) {
    auto* cmd = app.add_subcommand("eval-qm", "Balanced accuracy of query matching on labelled samples");
    cmd->add_option("--samples", samples, "Samples JSONL")->required();
    cmd->add_option("--scores", scores, "Directory of score CSVs")->required();
    cmd->add_option("--threshold", threshold, "adaptive or fixed")->check(CLI::IsMember({"adaptive", "fixed"}))->capture_default_str();
    cmd->add_option("--ablate", ablate, "stl, no-smoothing or fixed-threshold")->check(CLI::IsMember({"stl", "no-smoothing", "fixed-threshold"}));
    cmd->add_flag("--per-sample", per_sample, "Print one line per sample");
    flags.add_to(cmd);
  }

  int run(std::ostream& out) {
    match_options options;
    options.window = window_policy::parse(flags.window);
    options.threshold = parse_threshold_mode(threshold);
    options.scoring = parse_semantics(flags.semantics_name);
    options.stl = flags.stl();
    if (ablate == "stl") options.scoring = semantics::stl;
    if (ablate == "no-smoothing") options.window = window_policy::of(1);
    if (ablate == "fixed-threshold") options.threshold = threshold_mode::fixed;
    const input_domain domain = parse_input_domain(flags.domain);

    const auto rows = read_jsonl(samples);
    std::map<std::string, score_trace> by_id;
    for (auto& t : load_score_db(scores, domain)) {
      std::string id = t.id();
      by_id.emplace(std::move(id), std::move(t));
    }

    struct sample {
      std::string key, trace, query, tmpl;
      int start, end;
      bool label;
    };
    std::vector<sample> parsed;
    for (const auto& [line_no, j] : rows) {
      try {
        sample s;
        s.trace = j.at("trace").get<std::string>();
        s.start = j.at("start").get<int>();
        s.end = j.at("end").get<int>();
        s.query = j.at("query").get<std::string>();
        s.label = parse_sample_label(j.at("label"));
        s.tmpl = j.value("template", std::string("custom"));
        s.key = std::to_string(parsed.size());
        if (!by_id.count(s.trace)) throw data_error("unknown trace '" + s.trace + "'");
        parsed.push_back(std::move(s));
      } catch (const json::exception& e) {
        throw data_error(std::string("malformed sample: ") + e.what(), samples, line_no);
      } catch (const data_error& e) {
        throw data_error(e.what(), samples, line_no);
      }
    }
    if (parsed.empty()) throw data_error("no samples", samples);

    std::vector<match_result> results(parsed.size());
    parallel_for(parsed.size(), [&](std::size_t i) {
      const auto& s = parsed[i];
      const score_trace& full = by_id.at(s.trace);
      if (s.start < 1 || s.start > s.end || s.end > full.length()) throw data_error("sample span outside trace '" + s.trace + "'");
      results[i] = query_match(full.slice(s.start, s.end), parse_formula(s.query), options);
    });

    std::map<std::string, bool> predictions, labels;
    std::map<std::string, std::pair<std::map<std::string, bool>, std::map<std::string, bool>>> by_category, by_template;
    for (std::size_t i = 0; i < parsed.size(); ++i) {
      const auto& s = parsed[i];
      predictions[s.key] = results[i].matched;
      labels[s.key] = s.label;
      auto& cat = by_category[category_of(s.tmpl)];
      cat.first[s.key] = results[i].matched;
      cat.second[s.key] = s.label;
      auto& tm = by_template[s.tmpl];
      tm.first[s.key] = results[i].matched;
      tm.second[s.key] = s.label;
      if (per_sample) {
        json j;
        j["trace"] = s.trace;
        j["start"] = s.start;
        j["end"] = s.end;
        j["query"] = s.query;
        j["label"] = s.label;
        j["score"] = number(results[i].score);
        j["threshold"] = number(results[i].threshold);
        j["matched"] = results[i].matched;
        emit(out, j);
      }
    }
    json report;
    report["samples"] = parsed.size();
    report["semantics"] = std::string(to_string(options.scoring));
    report["threshold_mode"] = std::string(to_string(options.threshold));
    report["window"] = flags.window;
    if (!ablate.empty()) report["ablate"] = ablate;
    report["balanced_accuracy"] = balanced_accuracy(predictions, labels);
    report["by_category"] = grouped_accuracy(by_category);
    report["by_template"] = grouped_accuracy(by_template);
    emit(out, report);
    return ok;
  }
};

struct eval_retrieval_cmd {
  std::string db, queries, relevance, ablate;
  scoring_flags flags;
  bool per_query = false;

  void setup(CLI::App& app) {
    auto* cmd = app.add_subcommand("eval-retrieval", "IR metrics of ranked retrieval");
    cmd->add_option("--db", db, "Directory of score CSVs")->required();
    cmd->add_option("--queries", queries, "Queries JSONL")->required();
    cmd->add_option("--relevance", relevance, "Relevance JSONL (default: 'relevant' field of each query)");
    cmd->add_option("--ablate", ablate, "stl or no-smoothing")->check(CLI::IsMember({"stl", "no-smoothing"}));
    cmd->add_flag("--per-query", per_query, "Print one line per query");
    flags.window = "5";
    flags.add_to(cmd);
  }

  int run(std::ostream& out) {
    const window_policy policy = window_policy::parse(flags.window);
    semantics sem = parse_semantics(flags.semantics_name);
    const robustness_params stl = flags.stl();
    if (ablate == "stl") sem = semantics::stl;
    const bool no_smoothing = ablate == "no-smoothing";
    const auto traces = load_score_db(db, parse_input_domain(flags.domain));

    std::map<std::string, std::set<std::string>> external;
    if (!relevance.empty()) {
      for (const auto& [line_no, j] : read_jsonl(relevance)) {
        try {
          external[j.at("id").get<std::string>()] = j.at("relevant").get<std::set<std::string>>();
        } catch (const json::exception& e) {
          throw data_error(std::string("malformed relevance row: ") + e.what(), relevance, line_no);
        }
      }
    }

    std::vector<std::string> ids;
    std::vector<retrieval_query> requests;
    std::vector<std::set<std::string>> relevant_sets;
    for (const auto& [line_no, j] : read_jsonl(queries)) {
      try {
        retrieval_query q;
        const std::string id = j.value("id", "q" + std::to_string(ids.size()));
        q.query = parse_formula(j.at("query").get<std::string>());
        q.min_length = j.at("tlo").get<int>();
        q.max_length = j.at("thi").get<int>();
        q.k = static_cast<int>(traces.size());
        q.window = no_smoothing ? 1 : policy.resolve(q.min_length);
        q.scoring = sem;
        q.stl = stl;
        q.validate();
        std::set<std::string> rel;
        if (!relevance.empty()) {
          auto it = external.find(id);
          if (it == external.end()) throw data_error("no relevance entry for query '" + id + "'");
          rel = it->second;
        } else {
          rel = j.at("relevant").get<std::set<std::string>>();
        }
        ids.push_back(id);
        requests.push_back(std::move(q));
        relevant_sets.push_back(std::move(rel));
      } catch (const json::exception& e) {
        throw data_error(std::string("malformed query: ") + e.what(), queries, line_no);
      } catch (const parse_error& e) {
        throw data_error(e.what(), queries, line_no);
      } catch (const contract_error& e) {
        throw data_error(e.what(), queries, line_no);
      }
    }
    if (requests.empty()) throw data_error("no queries", queries);

    std::vector<std::vector<std::string>> rankings;
    for (const auto& q : requests) {
      std::vector<std::string> order;
      for (const auto& e : retrieve(traces, q)) order.push_back(e.id);
      rankings.push_back(std::move(order));
    }
    const metric_report report = ir_metrics(rankings, relevant_sets, traces.size());

    if (per_query) {
      for (std::size_t i = 0; i < ids.size(); ++i) {
        const auto& m = report.queries[i];
        json j;
        j["id"] = ids[i];
        j["query"] = format_formula(requests[i].query);
        j["relevant"] = m.relevant;
        j["P@1"] = m.precision_at_1;
        j["P@5"] = m.precision_at_5;
        j["P@10"] = m.precision_at_10;
        j["P@r"] = m.precision_at_r;
        j["AP"] = m.average_precision;
        j["R@r"] = m.recall_at_r;
        j["first_rank"] = m.first_relevant_rank;
        emit(out, j);
      }
    }
    json j;
    j["queries"] = ids.size();
    j["semantics"] = std::string(to_string(sem));
    if (!ablate.empty()) j["ablate"] = ablate;
    j["P@1"] = report.precision_at_1;
    j["P@5"] = report.precision_at_5;
    j["P@10"] = report.precision_at_10;
    j["P@r"] = report.precision_at_r;
    j["mAP"] = report.mean_average_precision;
    j["R@r"] = report.recall_at_r;
    j["MnR"] = report.mean_rank;
    j["MdR"] = report.median_rank;
    emit(out, j);
    return ok;
  }
};

struct gen_qm_cmd {
  std::string labels, tmpl, out_path;
  int length = 0;
  std::size_t cap = 100;
  std::uint64_t seed = 0;

  void setup(CLI::App& app) {
    auto* cmd = app.add_subcommand("gen-qm", "Generate labelled query-matching samples from label traces");
    cmd->add_option("--labels", labels, "Directory of label CSVs")->required();
    cmd->add_option("--template", tmpl, "Template name, skeleton formula over p1..p3, or 'all'")->required();
    cmd->add_option("--length", length, "Sample length (timesteps)")->required();
    cmd->add_option("--cap", cap, "Maximum samples per template")->capture_default_str();
    cmd->add_option("--seed", seed, "Sampling seed")->capture_default_str();
    cmd->add_option("--out", out_path, "Output JSONL")->required();
  }

  int run(std::ostream& out) {
    if (length < 1) throw contract_error("--length must be >= 1");
    std::vector<query_template> templates;
    if (tmpl == "all") templates = template_catalog();
    else templates.push_back(resolve_template(tmpl));
    const auto traces = load_label_db(labels);

    std::string body;
    for (const auto& t : templates) {
      json summary;
      summary["template"] = t.name;
      try {
        const qm_generation gen = generate_qm_samples(traces, t, length, cap, seed);
        for (const auto& s : gen.samples) {
          json j;
          j["trace"] = s.trace;
          j["start"] = s.span.start;
          j["end"] = s.span.end;
          j["query"] = s.query;
          j["label"] = s.label ? "matching" : "non-matching";
          j["template"] = s.template_name;
          body += j.dump() + "\n";
        }
        summary["pool_matching"] = gen.pool_matching;
        summary["pool_non_matching"] = gen.pool_non_matching;
        summary["matching"] = gen.emitted_matching;
        summary["non_matching"] = gen.emitted_non_matching;
        summary["balanced"] = gen.balanced();
      } catch (const data_error& e) {
        if (templates.size() == 1) throw;
        summary["pool_matching"] = 0;
        summary["pool_non_matching"] = 0;
        summary["matching"] = 0;
        summary["non_matching"] = 0;
        summary["balanced"] = true;
        summary["note"] = e.what();
      }
      emit(out, summary);
    }
    write_text(out_path, body);
    return ok;
  }
};

struct gen_retrieval_cmd {
  std::string labels, out_path;
  int tlo = 0, thi = 0;
  std::size_t max_relevant = 50, per_template_cap = 5;
  std::uint64_t seed = 0;

  void setup(CLI::App& app) {
    auto* cmd = app.add_subcommand("gen-retrieval", "Generate retrieval queries with oracle relevance sets");
    cmd->add_option("--labels", labels, "Directory of label CSVs")->required();
    cmd->add_option("--tlo", tlo, "Minimum event length")->required();
    cmd->add_option("--thi", thi, "Maximum event length")->required();
    cmd->add_option("--max-relevant", max_relevant, "Drop queries relevant to more traces")->capture_default_str();
    cmd->add_option("--per-template-cap", per_template_cap, "Queries kept per template")->capture_default_str();
    cmd->add_option("--seed", seed, "Sampling seed")->capture_default_str();
    cmd->add_option("--out", out_path, "Output JSONL")->required();
  }

  int run(std::ostream& out) {
    if (tlo < 1 || tlo > thi) throw contract_error("--tlo/--thi must satisfy 1 <= tlo <= thi");
    const auto traces = load_label_db(labels);
    const auto truth = generate_retrieval_queries(traces, tlo, thi, max_relevant, per_template_cap, seed);
    std::string body;
    for (std::size_t i = 0; i < truth.kept.size(); ++i) {
      const auto& t = truth.kept[i];
      char id[16];
      std::snprintf(id, sizeof id, "q%03zu", i);
      json j;
      j["id"] = id;
      j["template"] = t.template_name;
      j["query"] = format_formula(t.query);
      j["tlo"] = tlo;
      j["thi"] = thi;
      j["relevant"] = t.relevant;
      body += j.dump() + "\n";
    }
    write_text(out_path, body);
    json summary;
    summary["kept"] = truth.kept.size();
    summary["dropped"] = truth.dropped.size();
    emit(out, summary);
    return ok;
  }
};

struct synth_cmd {
  std::string spec, out_dir;
  std::uint64_t seed = 0;

  void setup(CLI::App& app) {
    auto* cmd = app.add_subcommand("synth", "Generate synthetic score and label traces");
    cmd->add_option("--spec", spec, "Synthetic corpus JSON")->required();
    cmd->add_option("--seed", seed, "Corpus seed")->capture_default_str();
    cmd->add_option("--out-dir", out_dir, "Output directory (scores/ and labels/)")->required();
  }

  int run(std::ostream& out) {
    const auto specs = parse_synth_specs(read_text(spec), seed);
    const fs::path root(out_dir);
    for (std::size_t i = 0; i < specs.size(); ++i) {
      const synth_result r = synth_trace(specs[i], derive_seed(seed, i));
      write_text(root / "scores" / (specs[i].id + ".csv"), write_score_csv(r.scores));
      write_text(root / "labels" / (specs[i].id + ".csv"), write_label_csv(r.labels));
      json j;
      j["id"] = specs[i].id;
      j["length"] = specs[i].length;
      j["classes"] = specs[i].classes;
      j["expressed"] = r.labels.expressed_classes();
      emit(out, j);
    }
    return ok;
  }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Scores for temporal properties over detector score traces", "tempo-score"};
  app.set_version_flag("--version", std::string("tempo-score ") + version);
  app.require_subcommand(1);

  score_cmd score;
  match_cmd match;
  retrieve_cmd retrieve_sub;
  oracle_cmd oracle;
  eval_qm_cmd eval_qm;
  eval_retrieval_cmd eval_retrieval;
  gen_qm_cmd gen_qm;
  gen_retrieval_cmd gen_retrieval;
  synth_cmd synth;
  score.setup(app);
  match.setup(app);
  retrieve_sub.setup(app);
  oracle.setup(app);
  eval_qm.setup(app);
  eval_retrieval.setup(app);
  gen_qm.setup(app);
  gen_retrieval.setup(app);
  synth.setup(app);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : usage_error;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    if (name == "score") return score.run(out);
    if (name == "match") return match.run(out);
    if (name == "retrieve") return retrieve_sub.run(out);
    if (name == "oracle") return oracle.run(out);
    if (name == "eval-qm") return eval_qm.run(out);
    if (name == "eval-retrieval") return eval_retrieval.run(out);
    if (name == "gen-qm") return gen_qm.run(out);
    if (name == "gen-retrieval") return gen_retrieval.run(out);
    if (name == "synth") return synth.run(out);
  } catch (const contract_error& e) {
    err << "error: " << e.what() << '\n';
    return usage_error;
  } catch (const parse_error& e) {
    err << "error: " << e.what() << '\n';
    return usage_error;
  } catch (const data_error& e) {
    err << "error: " << e.what() << '\n';
    return data_failure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return data_failure;
  }
  err << "error: unknown subcommand " << name << '\n';
  return usage_error;
}

}  // namespace tempo::cli
