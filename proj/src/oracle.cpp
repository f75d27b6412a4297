#include "tempo/oracle.hpp"

#include "tempo/error.hpp"

namespace tempo {

namespace {

using table = std::vector<std::vector<std::uint8_t>>;

// Fills truth values for every node at t in [first, last] on the trace
// truncated at `last`. Row i of a node holds timestep first + i.
table evaluate(const label_trace& labels, const formula& f, int first, int last) {
  const std::size_t n = static_cast<std::size_t>(last - first + 1);
  table values(f.size(), std::vector<std::uint8_t>(n, 0));
  for (int id = 0; id < static_cast<int>(f.size()); ++id) {
    const node& nd = f.at(id);
    auto& out = values[static_cast<std::size_t>(id)];
    switch (nd.kind) {
      case op::truth:
        std::fill(out.begin(), out.end(), 1);
        break;
      case op::falsity:
        break;
      case op::atom: {
        auto idx = labels.class_index(nd.name);
        if (!idx) break;
        auto col = labels.column(*idx);
        for (std::size_t i = 0; i < n; ++i) out[i] = col[static_cast<std::size_t>(first - 1) + i];
        break;
      }
      case op::negation: {
        const auto& a = values[nd.left];
        for (std::size_t i = 0; i < n; ++i) out[i] = !a[i];
        break;
      }
      case op::conjunction: {
        const auto& a = values[nd.left];
        const auto& b = values[nd.right];
        for (std::size_t i = 0; i < n; ++i) out[i] = a[i] && b[i];
        break;
      }
      case op::disjunction: {
        const auto& a = values[nd.left];
        const auto& b = values[nd.right];
        for (std::size_t i = 0; i < n; ++i) out[i] = a[i] || b[i];
        break;
      }
      case op::next: {
        const auto& a = values[nd.left];
        for (std::size_t i = 0; i + 1 < n; ++i) out[i] = a[i + 1];
        break;
      }
      case op::always: {
        const auto& a = values[nd.left];
        bool acc = true;
        for (std::size_t i = n; i-- > 0;) out[i] = acc = acc && a[i];
        break;
      }
      case op::eventually: {
        // ¬□¬φ, folded.
        const auto& a = values[nd.left];
        bool acc = false;
        for (std::size_t i = n; i-- > 0;) out[i] = acc = acc || a[i];
        break;
      }
      case op::until: {
        const auto& a = values[nd.left];
        const auto& b = values[nd.right];
        bool later = false;
        for (std::size_t i = n; i-- > 0;) out[i] = later = b[i] || (a[i] && later);
        break;
      }
    }
  }
  return values;
}

void check_span(const label_trace& labels, int first, int last) {
  if (first < 1 || first > last || last > labels.length()) {
    throw contract_error("timestep range [" + std::to_string(first) + ", " + std::to_string(last) + "] outside trace of length " +
                         std::to_string(labels.length()));
  }
}

}  // namespace

bool eval_boolean(const label_trace& labels, const formula& f, int t) {
  check_span(labels, t, labels.length());
  return evaluate(labels, f, t, labels.length())[f.root()][0] != 0;
}

bool eval_boolean_span(const label_trace& labels, const formula& f, int start, int end) {
  check_span(labels, start, end);
  return evaluate(labels, f, start, end)[f.root()][0] != 0;
}

std::vector<std::uint8_t> eval_boolean_suffixes(const label_trace& labels, const formula& f, int first, int last) {
  check_span(labels, first, last);
  return std::move(evaluate(labels, f, first, last)[f.root()]);
}

}  // namespace tempo
