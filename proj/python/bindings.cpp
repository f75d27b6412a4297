#include <sstream>
#include <variant>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "tempo/bench.hpp"
#include "tempo/cli.hpp"
#include "tempo/engine.hpp"
#include "tempo/error.hpp"
#include "tempo/matching.hpp"
#include "tempo/metrics.hpp"
#include "tempo/oracle.hpp"
#include "tempo/retrieval.hpp"
#include "tempo/robustness.hpp"

namespace py = pybind11;
using namespace tempo;

namespace {

using query_arg = std::variant<formula, std::string>;

formula as_formula(const query_arg& q) {
  if (const auto* f = std::get_if<formula>(&q)) return *f;
  return parse_formula(std::get<std::string>(q));
}

int end_or_length(std::optional<int> end, int length) { return end.value_or(length); }

py::dict metrics_dict(const query_metrics& m) {
  py::dict d;
  d["relevant"] = m.relevant;
  d["P@1"] = m.precision_at_1;
  d["P@5"] = m.precision_at_5;
  d["P@10"] = m.precision_at_10;
  d["P@r"] = m.precision_at_r;
  d["AP"] = m.average_precision;
  d["R@r"] = m.recall_at_r;
  d["first_relevant_rank"] = m.first_relevant_rank;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Scores for temporal properties over per-timestep detector scores";
  m.attr("__version__") = cli::version;

  static py::exception<contract_error> contract(m, "ContractError", PyExc_ValueError);
  static py::exception<parse_error> parse(m, "ParseError", PyExc_ValueError);
  static py::exception<data_error> data(m, "DataError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const contract_error& e) {
      PyErr_SetString(contract.ptr(), e.what());
    } catch (const parse_error& e) {
      PyErr_SetString(parse.ptr(), e.what());
    } catch (const data_error& e) {
      PyErr_SetString(data.ptr(), e.what());
    }
  });

  py::class_<formula>(m, "Formula")
      .def(py::init(&parse_formula), py::arg("text"))
      .def_property_readonly("atoms", &formula::atoms)
      .def_property_readonly("depth", &formula::depth)
      .def("__len__", &formula::size)
      .def("__str__", [](const formula& f) { return format_formula(f); })
      .def("__repr__", [](const formula& f) { return "Formula('" + format_formula(f) + "')"; })
      .def("__eq__", [](const formula& a, const formula& b) { return a == b; });

  py::class_<score_trace>(m, "ScoreTrace")
      .def(py::init([](std::string id, const std::map<std::string, std::vector<double>>& columns, const std::string& domain) {
             return parse_input_domain(domain) == input_domain::log ? score_trace::from_log_scores(std::move(id), columns)
                                                                    : score_trace::from_probabilities(std::move(id), columns);
           }),
           py::arg("id"), py::arg("columns"), py::arg("domain") = "prob")
      .def_static(
          "load", [](const std::filesystem::path& path, const std::string& domain) { return load_score_trace(path, parse_input_domain(domain)); },
          py::arg("path"), py::arg("domain") = "prob")
      .def_property_readonly("id", &score_trace::id)
      .def_property_readonly("length", &score_trace::length)
      .def_property_readonly("classes", &score_trace::classes)
      .def("probabilities",
           [](const score_trace& t, const std::string& name) {
             const auto idx = t.class_index(name);
             if (!idx) throw contract_error("unknown class '" + name + "'");
             const auto col = t.probabilities(*idx);
             return std::vector<double>(col.begin(), col.end());
           })
      .def("slice", &score_trace::slice, py::arg("start"), py::arg("end"))
      .def("to_csv", &write_score_csv)
      .def("__len__", &score_trace::length);

  py::class_<label_trace>(m, "LabelTrace")
      .def(py::init(&label_trace::from_columns), py::arg("id"), py::arg("columns"))
      .def_static("load", &load_label_trace, py::arg("path"))
      .def_property_readonly("id", &label_trace::id)
      .def_property_readonly("length", &label_trace::length)
      .def_property_readonly("classes", &label_trace::classes)
      .def("expressed_classes", &label_trace::expressed_classes)
      .def("__len__", &label_trace::length);

  m.def("parse_formula", &parse_formula, py::arg("text"));
  m.def(
      "load_score_db",
      [](const std::filesystem::path& dir, const std::string& domain) { return load_score_db(dir, parse_input_domain(domain)); },
      py::arg("directory"), py::arg("domain") = "prob");
  m.def("load_label_db", &load_label_db, py::arg("directory"));

  m.def(
      "logstop",
      [](const score_trace& trace, const query_arg& q, int start, std::optional<int> end, int window) {
        return logstop(trace, as_formula(q), start, end_or_length(end, trace.length()), window);
      },
      py::arg("trace"), py::arg("query"), py::arg("start") = 1, py::arg("end") = py::none(), py::arg("window") = 1,
      py::call_guard<py::gil_scoped_release>());

  m.def(
      "logstop_all_starts",
      [](const score_trace& trace, const query_arg& q, int anchor, std::optional<int> end, int window) {
        std::vector<std::pair<int, double>> out;
        for (const auto& s : logstop_all_starts(trace, as_formula(q), anchor, end_or_length(end, trace.length()), window))
          out.emplace_back(s.t, s.score);
        return out;
      },
      py::arg("trace"), py::arg("query"), py::arg("anchor") = 1, py::arg("end") = py::none(), py::arg("window") = 1);

  m.def(
      "stl_robustness",
      [](const score_trace& trace, const query_arg& q, int start, std::optional<int> end, int window, double tau) {
        return stl_robustness_window(trace, as_formula(q), start, end_or_length(end, trace.length()), window, robustness_params{tau});
      },
      py::arg("trace"), py::arg("query"), py::arg("start") = 1, py::arg("end") = py::none(), py::arg("window") = 1, py::arg("tau") = 0.5);

  m.def(
      "adaptive_threshold", [](const query_arg& q, int length, int window) { return adaptive_threshold(as_formula(q), length, window); },
      py::arg("query"), py::arg("length"), py::arg("window") = 1);

  m.def(
      "match",
      [](const score_trace& trace, const query_arg& q, const std::string& window, const std::string& threshold, const std::string& sem,
         double tau) {
        match_options o;
        o.window = window_policy::parse(window);
        o.threshold = parse_threshold_mode(threshold);
        o.scoring = parse_semantics(sem);
        o.stl = robustness_params{tau};
        const auto r = query_match(trace, as_formula(q), o);
        py::dict d;
        d["id"] = r.id;
        d["score"] = r.score;
        d["threshold"] = r.threshold;
        d["matched"] = r.matched;
        d["window"] = r.window;
        d["semantics"] = std::string(to_string(r.scoring));
        return d;
      },
      py::arg("trace"), py::arg("query"), py::arg("window") = "auto", py::arg("threshold") = "adaptive", py::arg("semantics") = "logstop",
      py::arg("tau") = 0.5);

  m.def(
      "retrieve",
      [](const std::vector<score_trace>& db, const query_arg& q, int tlo, int thi, int k, int window, const std::string& sem) {
        retrieval_query rq;
        rq.query = as_formula(q);
        rq.min_length = tlo;
        rq.max_length = thi;
        rq.k = k;
        rq.window = window;
        rq.scoring = parse_semantics(sem);
        ranked_list ranked;
        {
          py::gil_scoped_release release;
          ranked = retrieve(db, rq);
        }
        py::list out;
        for (const auto& e : ranked) {
          py::dict d;
          d["id"] = e.id;
          d["score"] = e.score;
          if (e.best) d["span"] = py::make_tuple(e.best->start, e.best->end);
          else d["span"] = py::none();
          out.append(d);
        }
        return out;
      },
      py::arg("db"), py::arg("query"), py::arg("tlo"), py::arg("thi"), py::arg("k") = 10, py::arg("window") = 5,
      py::arg("semantics") = "logstop");

  m.def(
      "eval_boolean",
      [](const label_trace& labels, const query_arg& q, int start, std::optional<int> end) {
        return eval_boolean_span(labels, as_formula(q), start, end_or_length(end, labels.length()));
      },
      py::arg("labels"), py::arg("query"), py::arg("start") = 1, py::arg("end") = py::none());

  m.def(
      "rank_metrics",
      [](const std::vector<std::string>& ranking, const std::set<std::string>& relevant) { return metrics_dict(rank_metrics(ranking, relevant)); },
      py::arg("ranking"), py::arg("relevant"));

  m.def(
      "ir_metrics",
      [](const std::vector<std::vector<std::string>>& rankings, const std::vector<std::set<std::string>>& relevance, std::size_t db_size) {
        const auto r = ir_metrics(rankings, relevance, db_size);
        py::dict d;
        d["P@1"] = r.precision_at_1;
        d["P@5"] = r.precision_at_5;
        d["P@10"] = r.precision_at_10;
        d["P@r"] = r.precision_at_r;
        d["mAP"] = r.mean_average_precision;
        d["R@r"] = r.recall_at_r;
        d["MnR"] = r.mean_rank;
        d["MdR"] = r.median_rank;
        return d;
      },
      py::arg("rankings"), py::arg("relevance"), py::arg("db_size"));

  m.def("balanced_accuracy", &balanced_accuracy, py::arg("predictions"), py::arg("labels"));

  m.def(
      "templates",
      [] {
        py::list out;
        for (const auto& t : template_catalog()) {
          py::dict d;
          d["name"] = t.name;
          d["category"] = std::string(to_string(t.category));
          d["shape"] = format_formula(t.shape);
          out.append(d);
        }
        return out;
      });

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}
