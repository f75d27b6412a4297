#include "tempo/trace.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "tempo/error.hpp"

namespace tempo {

namespace {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();

std::unordered_map<std::string, std::size_t> make_index(const std::vector<std::string>& classes) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < classes.size(); ++i) index.emplace(classes[i], i);
  return index;
}

void check_window(int t_s, int t_e, int w, int length) {
  if (w < 1) throw contract_error("window must be >= 1");
  if (t_s < 1 || t_s > t_e || t_e > length) {
    throw contract_error("window [" + std::to_string(t_s) + ", " + std::to_string(t_e) + "] outside trace of length " +
                         std::to_string(length));
  }
}

// RFC 4180-style field splitter: quoted fields may contain commas and
// doubled quotes.
std::vector<std::string> split_csv_row(std::string_view line, const std::string& origin, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string field;
  std::size_t i = 0;
  bool quoted = false;
  bool was_quoted = false;
  while (i < line.size()) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          i += 2;
          continue;
        }
        quoted = false;
      } else {
        field.push_back(c);
      }
    } else if (c == '"' && field.empty() && !was_quoted) {
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
      was_quoted = false;
    } else {
      field.push_back(c);
    }
    ++i;
  }
  if (quoted) throw data_error("unterminated quoted field", origin, line_no);
  fields.push_back(std::move(field));
  return fields;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <class Fn>
void for_each_row(std::string_view text, std::string_view value_column, const std::string& origin, Fn&& fn) {
  std::size_t line_no = 0;
  bool header_seen = false;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    if (line.empty()) {
      if (nl == text.size()) break;
      continue;
    }
    auto fields = split_csv_row(line, origin, line_no);
    if (!header_seen) {
      header_seen = true;
      if (fields.size() != 3 || trim(fields[0]) != "t" || trim(fields[1]) != "class" || trim(fields[2]) != value_column) {
        throw data_error("expected header 't,class," + std::string(value_column) + "'", origin, line_no);
      }
      continue;
    }
    if (fields.size() != 3) throw data_error("malformed row: expected 3 fields", origin, line_no);
    fn(fields, line_no);
    if (nl == text.size()) break;
  }
  if (!header_seen) throw data_error("empty file", origin);
}

int parse_timestep(std::string_view s, const std::string& origin, std::size_t line_no) {
  s = trim(s);
  long long value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw data_error("malformed row: bad timestep '" + std::string(s) + "'", origin, line_no);
  if (value < 1) throw data_error("non-positive timestep " + std::to_string(value), origin, line_no);
  if (value > std::numeric_limits<int>::max()) throw data_error("timestep too large", origin, line_no);
  return static_cast<int>(value);
}

double parse_real(std::string_view s, const std::string& origin, std::size_t line_no) {
  s = trim(s);
  std::string copy(s);
  if (copy == "-inf" || copy == "-Infinity") return neg_inf;
  char* end = nullptr;
  const double value = std::strtod(copy.c_str(), &end);
  if (copy.empty() || end != copy.c_str() + copy.size() || std::isnan(value)) {
    throw data_error("malformed row: bad score '" + copy + "'", origin, line_no);
  }
  return value;
}

std::string class_field(std::string_view raw, const std::string& origin, std::size_t line_no) {
  std::string name(trim(raw));
  if (name.empty()) throw data_error("malformed row: empty class name", origin, line_no);
  return name;
}

std::string csv_quote(const std::string& name) {
  if (name.find_first_of(",\"\n") == std::string::npos && trim(name) == name) return name;
  std::string out = "\"";
  for (char c : name) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string format_double(double v) {
  if (v == 0.0) return "0";
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot open file", path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::filesystem::path> db_files(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw data_error("not a directory", dir.string());
  std::vector<fs::path> files;
  const fs::path manifest = dir / "manifest.json";
  if (fs::exists(manifest)) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(read_file(manifest));
    } catch (const nlohmann::json::exception& e) {
      throw data_error(std::string("invalid manifest: ") + e.what(), manifest.string());
    }
    const nlohmann::json& ids = doc.is_object() ? doc.value("ids", nlohmann::json::array()) : doc;
    if (!ids.is_array()) throw data_error("manifest must list ids", manifest.string());
    for (const auto& id : ids) {
      if (!id.is_string()) throw data_error("manifest ids must be strings", manifest.string());
      fs::path p = dir / (id.get<std::string>() + ".csv");
      if (!fs::exists(p)) throw data_error("manifest lists missing trace '" + id.get<std::string>() + "'", manifest.string());
      files.push_back(std::move(p));
    }
  } else {
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end(), [](const fs::path& a, const fs::path& b) { return a.stem().string() < b.stem().string(); });
  files.erase(std::unique(files.begin(), files.end()), files.end());
  if (files.empty()) throw data_error("no traces found", dir.string());
  return files;
}

}  // namespace

// ---------------------------------------------------------------------------
// score_trace

score_trace score_trace::assemble(std::string id, int length, std::vector<std::string> classes,
                                  std::vector<std::vector<double>> probs, std::vector<std::vector<double>> logs) {
  if (length < 1) throw data_error("trace '" + id + "' has no timesteps");
  score_trace trace;
  trace.id_ = std::move(id);
  trace.length_ = length;
  trace.classes_ = std::move(classes);
  trace.index_ = make_index(trace.classes_);
  trace.probs_ = std::move(probs);
  trace.logs_ = std::move(logs);
  return trace;
}

score_trace score_trace::from_probabilities(std::string id, const std::map<std::string, std::vector<double>>& columns) {
  std::vector<std::string> classes;
  std::vector<std::vector<double>> probs, logs;
  int length = -1;
  for (const auto& [name, column] : columns) {
    if (name.empty()) throw data_error("empty class name");
    if (length >= 0 && static_cast<int>(column.size()) != length) throw data_error("columns of unequal length");
    length = static_cast<int>(column.size());
    std::vector<double> lg(column.size());
    for (std::size_t i = 0; i < column.size(); ++i) {
      const double p = column[i];
      if (!(p >= 0.0 && p <= 1.0)) throw data_error("probability outside [0,1] for class '" + name + "'");
      lg[i] = std::log(p);
    }
    classes.push_back(name);
    probs.push_back(column);
    logs.push_back(std::move(lg));
  }
  return assemble(std::move(id), length, std::move(classes), std::move(probs), std::move(logs));
}

score_trace score_trace::from_log_scores(std::string id, const std::map<std::string, std::vector<double>>& columns) {
  std::vector<std::string> classes;
  std::vector<std::vector<double>> probs, logs;
  int length = -1;
  for (const auto& [name, column] : columns) {
    if (name.empty()) throw data_error("empty class name");
    if (length >= 0 && static_cast<int>(column.size()) != length) throw data_error("columns of unequal length");
    length = static_cast<int>(column.size());
    std::vector<double> pr(column.size());
    for (std::size_t i = 0; i < column.size(); ++i) {
      const double s = column[i];
      if (std::isnan(s) || s > 0.0) throw data_error("log score > 0 for class '" + name + "'");
      pr[i] = std::exp(s);
    }
    classes.push_back(name);
    probs.push_back(std::move(pr));
    logs.push_back(column);
  }
  return assemble(std::move(id), length, std::move(classes), std::move(probs), std::move(logs));
}

std::optional<std::size_t> score_trace::class_index(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

double score_trace::log_score(int t, std::string_view name) const {
  if (t < 1 || t > length_) throw contract_error("timestep out of range");
  auto idx = class_index(name);
  return idx ? logs_[*idx][t - 1] : neg_inf;
}

double score_trace::probability(int t, std::string_view name) const {
  if (t < 1 || t > length_) throw contract_error("timestep out of range");
  auto idx = class_index(name);
  return idx ? probs_[*idx][t - 1] : 0.0;
}

score_trace score_trace::slice(int start, int end) const {
  if (start < 1 || start > end || end > length_) throw contract_error("slice outside trace");
  std::vector<std::vector<double>> probs, logs;
  for (std::size_t c = 0; c < classes_.size(); ++c) {
    probs.emplace_back(probs_[c].begin() + (start - 1), probs_[c].begin() + end);
    logs.emplace_back(logs_[c].begin() + (start - 1), logs_[c].begin() + end);
  }
  return assemble(id_, end - start + 1, classes_, std::move(probs), std::move(logs));
}

// ---------------------------------------------------------------------------
// label_trace

label_trace label_trace::from_columns(std::string id, const std::map<std::string, std::vector<int>>& columns) {
  label_trace trace;
  trace.id_ = std::move(id);
  int length = -1;
  for (const auto& [name, column] : columns) {
    if (name.empty()) throw data_error("empty class name");
    if (length >= 0 && static_cast<int>(column.size()) != length) throw data_error("columns of unequal length");
    length = static_cast<int>(column.size());
    std::vector<std::uint8_t> col(column.size());
    for (std::size_t i = 0; i < column.size(); ++i) {
      if (column[i] != 0 && column[i] != 1) throw data_error("label must be 0 or 1");
      col[i] = static_cast<std::uint8_t>(column[i]);
    }
    trace.classes_.push_back(name);
    trace.labels_.push_back(std::move(col));
  }
  if (length < 1) throw data_error("trace '" + trace.id_ + "' has no timesteps");
  trace.length_ = length;
  trace.index_ = make_index(trace.classes_);
  return trace;
}

std::optional<std::size_t> label_trace::class_index(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool label_trace::label(int t, std::string_view name) const {
  if (t < 1 || t > length_) throw contract_error("timestep out of range");
  auto idx = class_index(name);
  return idx && labels_[*idx][t - 1] != 0;
}

std::vector<std::string> label_trace::expressed_classes() const {
  std::vector<std::string> out;
  for (std::size_t c = 0; c < classes_.size(); ++c) {
    if (std::any_of(labels_[c].begin(), labels_[c].end(), [](std::uint8_t v) { return v != 0; })) out.push_back(classes_[c]);
  }
  return out;
}

label_trace label_trace::slice(int start, int end) const {
  if (start < 1 || start > end || end > length_) throw contract_error("slice outside trace");
  label_trace out;
  out.id_ = id_;
  out.length_ = end - start + 1;
  out.classes_ = classes_;
  out.index_ = index_;
  for (const auto& col : labels_) out.labels_.emplace_back(col.begin() + (start - 1), col.begin() + end);
  return out;
}

label_trace label_trace::from_scores(const score_trace& scores, double tau) {
  std::map<std::string, std::vector<int>> columns;
  for (std::size_t c = 0; c < scores.classes().size(); ++c) {
    auto probs = scores.probabilities(c);
    std::vector<int> col(probs.size());
    for (std::size_t i = 0; i < probs.size(); ++i) col[i] = probs[i] > tau ? 1 : 0;
    columns.emplace(scores.classes()[c], std::move(col));
  }
  return from_columns(scores.id(), columns);
}

// ---------------------------------------------------------------------------
// smoothing

double window_mean(std::span<const double> probs, int t_s, int t_e, int w) {
  const int last = std::min(t_s + w - 1, t_e);
  // Neumaier compensated sum.
  double sum = 0.0;
  double comp = 0.0;
  for (int t = t_s; t <= last; ++t) {
    const double v = probs[static_cast<std::size_t>(t - 1)];
    const double s = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      comp += (sum - s) + v;
    } else {
      comp += (v - s) + sum;
    }
    sum = s;
  }
  return (sum + comp) / static_cast<double>(last - t_s + 1);
}

double smooth_window(std::span<const double> probs, int t_s, int t_e, int w) {
  if (w == 1 || t_s == t_e) return std::log(probs[static_cast<std::size_t>(t_s - 1)]);
  return std::log(window_mean(probs, t_s, t_e, w));
}

double smooth_atom(const score_trace& trace, std::string_view name, int t_s, int t_e, int w) {
  check_window(t_s, t_e, w, trace.length());
  auto idx = trace.class_index(name);
  if (!idx) return neg_inf;
  if (w == 1 || t_s == t_e) return trace.log_scores(*idx)[static_cast<std::size_t>(t_s - 1)];
  return smooth_window(trace.probabilities(*idx), t_s, t_e, w);
}

// ---------------------------------------------------------------------------
// CSV

score_trace parse_score_csv(std::string_view text, std::string id, input_domain domain, const std::string& origin) {
  std::map<std::string, std::map<int, double>> rows;
  int length = 0;
  for_each_row(text, "score", origin, [&](const std::vector<std::string>& f, std::size_t line_no) {
    const int t = parse_timestep(f[0], origin, line_no);
    std::string name = class_field(f[1], origin, line_no);
    const double v = parse_real(f[2], origin, line_no);
    if (domain == input_domain::probability) {
      if (!(v >= 0.0 && v <= 1.0)) throw data_error("probability outside [0,1]", origin, line_no);
    } else if (v > 0.0) {
      throw data_error("log score > 0", origin, line_no);
    }
    auto [it, inserted] = rows[name].emplace(t, v);
    if (!inserted) throw data_error("duplicate (t, class) pair (" + std::to_string(t) + ", " + name + ")", origin, line_no);
    length = std::max(length, t);
  });
  if (length == 0) throw data_error("no data rows", origin);

  std::map<std::string, std::vector<double>> columns;
  const double missing = domain == input_domain::probability ? 0.0 : neg_inf;
  for (const auto& [name, by_t] : rows) {
    std::vector<double> col(static_cast<std::size_t>(length), missing);
    for (const auto& [t, v] : by_t) col[t - 1] = v;
    columns.emplace(name, std::move(col));
  }
  return domain == input_domain::probability ? score_trace::from_probabilities(std::move(id), columns)
                                             : score_trace::from_log_scores(std::move(id), columns);
}

label_trace parse_label_csv(std::string_view text, std::string id, const std::string& origin) {
  std::map<std::string, std::map<int, int>> rows;
  int length = 0;
  for_each_row(text, "label", origin, [&](const std::vector<std::string>& f, std::size_t line_no) {
    const int t = parse_timestep(f[0], origin, line_no);
    std::string name = class_field(f[1], origin, line_no);
    const std::string_view raw = trim(f[2]);
    if (raw != "0" && raw != "1") throw data_error("label must be 0 or 1", origin, line_no);
    auto [it, inserted] = rows[name].emplace(t, raw == "1" ? 1 : 0);
    if (!inserted) throw data_error("duplicate (t, class) pair (" + std::to_string(t) + ", " + name + ")", origin, line_no);
    length = std::max(length, t);
  });
  if (length == 0) throw data_error("no data rows", origin);
  std::map<std::string, std::vector<int>> columns;
  for (const auto& [name, by_t] : rows) {
    std::vector<int> col(static_cast<std::size_t>(length), 0);
    for (const auto& [t, v] : by_t) col[t - 1] = v;
    columns.emplace(name, std::move(col));
  }
  return label_trace::from_columns(std::move(id), columns);
}

score_trace load_score_trace(const std::filesystem::path& path, input_domain domain) {
  return parse_score_csv(read_file(path), path.stem().string(), domain, path.string());
}

label_trace load_label_trace(const std::filesystem::path& path) {
  return parse_label_csv(read_file(path), path.stem().string(), path.string());
}

std::vector<score_trace> load_score_db(const std::filesystem::path& dir, input_domain domain) {
  std::vector<score_trace> out;
  for (const auto& p : db_files(dir)) out.push_back(load_score_trace(p, domain));
  return out;
}

std::vector<label_trace> load_label_db(const std::filesystem::path& dir) {
  std::vector<label_trace> out;
  for (const auto& p : db_files(dir)) out.push_back(load_label_trace(p));
  return out;
}

std::string write_score_csv(const score_trace& trace) {
  std::string out = "t,class,score\n";
  for (int t = 1; t <= trace.length(); ++t) {
    for (std::size_t c = 0; c < trace.classes().size(); ++c) {
      out += std::to_string(t) + "," + csv_quote(trace.classes()[c]) + "," +
             format_double(trace.probabilities(c)[static_cast<std::size_t>(t - 1)]) + "\n";
    }
  }
  return out;
}

std::string write_label_csv(const label_trace& trace) {
  std::string out = "t,class,label\n";
  for (int t = 1; t <= trace.length(); ++t) {
    for (std::size_t c = 0; c < trace.classes().size(); ++c) {
      out += std::to_string(t) + "," + csv_quote(trace.classes()[c]) + "," +
             (trace.column(c)[static_cast<std::size_t>(t - 1)] ? "1" : "0") + "\n";
    }
  }
  return out;
}

input_domain parse_input_domain(std::string_view text) {
  if (text == "prob" || text == "probability") return input_domain::probability;
  if (text == "log") return input_domain::log;
  throw contract_error("input domain must be 'prob' or 'log'");
}

}  // namespace tempo
