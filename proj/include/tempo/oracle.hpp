#pragma once

#include <cstdint>
#include <vector>

#include "tempo/formula.hpp"
#include "tempo/trace.hpp"

namespace tempo {

/// Finite-trace boolean LTL semantics. Next is strong (false at the final
/// timestep), Always and Until range over [t, T], Until's left operand must
/// hold on the half-open prefix [t, t').
bool eval_boolean(const label_trace& labels, const formula& f, int t);

/// Truth of `f` at `start` on the trace truncated to [start, end].
bool eval_boolean_span(const label_trace& labels, const formula& f, int start, int end);

/// Truth of `f` at every start t in [first, last], each evaluated on the
/// trace truncated to [t, last]. Element i corresponds to t = first + i.
/// One pass, O((last - first + 1) * |f|).
std::vector<std::uint8_t> eval_boolean_suffixes(const label_trace& labels, const formula& f, int first, int last);

}  // namespace tempo
