#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace tempo {

enum class op : std::uint8_t {
  truth,
  falsity,
  atom,
  negation,
  conjunction,
  disjunction,
  next,
  always,
  eventually,
  until,
};

/// Number of children an operator takes (0, 1 or 2).
int arity(op kind) noexcept;

/// Node of a formula arena. Children always carry smaller ids than their
/// parent, so iterating ids in increasing order is a valid bottom-up schedule.
struct node {
  op kind = op::truth;
  int left = -1;
  int right = -1;
  std::string name;  // atom class name; empty for operators

  bool operator==(const node&) const = default;
};

/// Immutable LTL formula stored as a post-order node arena. Node ids are
/// dense in [0, size()) and the root is size() - 1.
class formula {
 public:
  formula();  // `true`

  static formula top();
  static formula bottom();
  static formula atom(std::string name);

  friend formula operator!(const formula& f);
  friend formula operator&(const formula& l, const formula& r);
  friend formula operator|(const formula& l, const formula& r);
  friend formula next(const formula& f);
  friend formula always(const formula& f);
  friend formula eventually(const formula& f);
  friend formula until(const formula& l, const formula& r);

  std::size_t size() const noexcept { return nodes_.size(); }
  int root() const noexcept { return static_cast<int>(nodes_.size()) - 1; }
  const node& at(int id) const { return nodes_.at(static_cast<std::size_t>(id)); }
  const std::vector<node>& nodes() const noexcept { return nodes_; }

  /// Subformula rooted at `id`, renumbered from zero.
  formula subformula(int id) const;

  /// Distinct atom names in first-occurrence order.
  std::vector<std::string> atoms() const;

  /// Maximum operator nesting; an atom or constant has depth 0.
  int depth() const;

  /// Replaces every atom whose name `rename` maps to a non-empty string.
  formula rename_atoms(const std::function<std::string(const std::string&)>& rename) const;

  bool operator==(const formula&) const = default;

 private:
  explicit formula(std::vector<node> nodes) : nodes_(std::move(nodes)) {}
  static formula unary(op kind, const formula& child);
  static formula binary(op kind, const formula& l, const formula& r);

  std::vector<node> nodes_;
};

formula operator!(const formula& f);
formula operator&(const formula& l, const formula& r);
formula operator|(const formula& l, const formula& r);
formula next(const formula& f);
formula always(const formula& f);
formula eventually(const formula& f);
formula until(const formula& l, const formula& r);

/// Parses the query language:
///
///   or      := and ('|' and)*
///   and     := until ('&' until)*
///   until   := unary ('U' until)?
///   unary   := ('!' | 'X' | 'G' | 'F') unary | primary
///   primary := 'true' | 'false' | IDENT | "quoted" | '(' or ')'
///
/// Throws parse_error on malformed input.
formula parse_formula(std::string_view text);

/// Canonical fully parenthesized rendering; parse_formula inverts it.
std::string format_formula(const formula& f);

/// True when `name` can be written without quotes.
bool is_bare_identifier(std::string_view name);

}  // namespace tempo
