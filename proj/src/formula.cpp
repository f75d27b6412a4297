#include "tempo/formula.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "tempo/error.hpp"

namespace tempo {

int arity(op kind) noexcept {
  switch (kind) {
    case op::truth:
    case op::falsity:
    case op::atom:
      return 0;
    case op::negation:
    case op::next:
    case op::always:
    case op::eventually:
      return 1;
    case op::conjunction:
    case op::disjunction:
    case op::until:
      return 2;
  }
  return 0;
}

namespace {

void append_shifted(std::vector<node>& out, const std::vector<node>& src, int shift) {
  for (node n : src) {
    if (n.left >= 0) n.left += shift;
    if (n.right >= 0) n.right += shift;
    out.push_back(std::move(n));
  }
}

}  // namespace

formula::formula() : nodes_{node{op::truth, -1, -1, {}}} {}

formula formula::top() { return formula{}; }

formula formula::bottom() { return formula{std::vector<node>{node{op::falsity, -1, -1, {}}}}; }

formula formula::atom(std::string name) {
  if (name.empty()) throw contract_error("atom name must be non-empty");
  return formula{std::vector<node>{node{op::atom, -1, -1, std::move(name)}}};
}

formula formula::unary(op kind, const formula& child) {
  std::vector<node> nodes;
  nodes.reserve(child.size() + 1);
  append_shifted(nodes, child.nodes_, 0);
  nodes.push_back(node{kind, child.root(), -1, {}});
  return formula{std::move(nodes)};
}

formula formula::binary(op kind, const formula& l, const formula& r) {
  std::vector<node> nodes;
  nodes.reserve(l.size() + r.size() + 1);
  append_shifted(nodes, l.nodes_, 0);
  const int shift = static_cast<int>(l.size());
  append_shifted(nodes, r.nodes_, shift);
  nodes.push_back(node{kind, l.root(), r.root() + shift, {}});
  return formula{std::move(nodes)};
}

formula operator!(const formula& f) { return formula::unary(op::negation, f); }
formula operator&(const formula& l, const formula& r) { return formula::binary(op::conjunction, l, r); }
formula operator|(const formula& l, const formula& r) { return formula::binary(op::disjunction, l, r); }
formula next(const formula& f) { return formula::unary(op::next, f); }
formula always(const formula& f) { return formula::unary(op::always, f); }
formula eventually(const formula& f) { return formula::unary(op::eventually, f); }
formula until(const formula& l, const formula& r) { return formula::binary(op::until, l, r); }

formula formula::subformula(int id) const {
  const node& n = at(id);
  switch (arity(n.kind)) {
    case 0:
      return formula{std::vector<node>{node{n.kind, -1, -1, n.name}}};
    case 1:
      return unary(n.kind, subformula(n.left));
    default:
      return binary(n.kind, subformula(n.left), subformula(n.right));
  }
}

std::vector<std::string> formula::atoms() const {
  std::vector<std::string> out;
  for (const node& n : nodes_) {
    if (n.kind == op::atom && std::find(out.begin(), out.end(), n.name) == out.end()) {
      out.push_back(n.name);
    }
  }
  return out;
}

int formula::depth() const {
  std::vector<int> d(nodes_.size(), 0);
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const node& n = nodes_[i];
    if (n.left >= 0) d[i] = std::max(d[i], d[n.left] + 1);
    if (n.right >= 0) d[i] = std::max(d[i], d[n.right] + 1);
  }
  return d.back();
}

formula formula::rename_atoms(const std::function<std::string(const std::string&)>& rename) const {
  std::vector<node> nodes = nodes_;
  for (node& n : nodes) {
    if (n.kind != op::atom) continue;
    std::string replacement = rename(n.name);
    if (!replacement.empty()) n.name = std::move(replacement);
  }
  return formula{std::move(nodes)};
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

bool is_keyword(std::string_view word) {
  return word == "true" || word == "false" || word == "X" || word == "G" || word == "F" || word == "U";
}

enum class tok : std::uint8_t { end, lparen, rparen, bang, amp, bar, next, always, eventually, until, truth, falsity, ident, quoted };

struct token {
  tok kind = tok::end;
  std::size_t offset = 0;
  std::string text;
};

class parser {
 public:
  explicit parser(std::string_view text) : text_(text) { advance(); }

  formula parse() {
    if (current_.kind == tok::end) {
      throw parse_error("empty query", current_.offset, {"formula"});
    }
    formula f = parse_or();
    if (current_.kind != tok::end) {
      throw parse_error("unexpected token '" + current_.text + "'", current_.offset, {"'&'", "'|'", "'U'", "')'", "end of input"});
    }
    return f;
  }

 private:
  formula parse_or() {
    formula lhs = parse_and();
    while (current_.kind == tok::bar) {
      advance();
      lhs = lhs | parse_and();
    }
    return lhs;
  }

  formula parse_and() {
    formula lhs = parse_until();
    while (current_.kind == tok::amp) {
      advance();
      lhs = lhs & parse_until();
    }
    return lhs;
  }

  formula parse_until() {
    formula lhs = parse_unary();
    if (current_.kind == tok::until) {
      advance();
      return until(lhs, parse_until());
    }
    return lhs;
  }

  formula parse_unary() {
    switch (current_.kind) {
      case tok::bang:
        advance();
        return !parse_unary();
      case tok::next:
        advance();
        return next(parse_unary());
      case tok::always:
        advance();
        return always(parse_unary());
      case tok::eventually:
        advance();
        return eventually(parse_unary());
      default:
        return parse_primary();
    }
  }

  formula parse_primary() {
    token t = current_;
    switch (t.kind) {
      case tok::truth:
        advance();
        return formula::top();
      case tok::falsity:
        advance();
        return formula::bottom();
      case tok::ident:
      case tok::quoted:
        advance();
        return formula::atom(std::move(t.text));
      case tok::lparen: {
        advance();
        formula inner = parse_or();
        if (current_.kind != tok::rparen) {
          throw parse_error(current_.kind == tok::end ? "unbalanced parenthesis" : "unexpected token '" + current_.text + "'",
                            current_.offset, {"')'"});
        }
        advance();
        return inner;
      }
      default:
        throw parse_error(t.kind == tok::end ? "unexpected end of input" : "unexpected token '" + t.text + "'", t.offset,
                          {"'!'", "'X'", "'G'", "'F'", "'('", "'true'", "'false'", "identifier", "quoted atom"});
    }
  }

  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    current_ = token{};
    current_.offset = pos_;
    if (pos_ >= text_.size()) {
      current_.kind = tok::end;
      return;
    }
    const char c = text_[pos_];
    auto single = [&](tok kind) {
      current_.kind = kind;
      current_.text = std::string(1, c);
      ++pos_;
    };
    switch (c) {
      case '(': return single(tok::lparen);
      case ')': return single(tok::rparen);
      case '!': return single(tok::bang);
      case '&': return single(tok::amp);
      case '|': return single(tok::bar);
      case '"': return lex_quoted();
      default: break;
    }
    if (!is_ident_start(c)) {
      throw parse_error(std::string("invalid character '") + c + "'", pos_, {"operator", "identifier", "quoted atom"});
    }
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
    current_.text = std::string(text_.substr(start, pos_ - start));
    if (current_.text == "true") current_.kind = tok::truth;
    else if (current_.text == "false") current_.kind = tok::falsity;
    else if (current_.text == "X") current_.kind = tok::next;
    else if (current_.text == "G") current_.kind = tok::always;
    else if (current_.text == "F") current_.kind = tok::eventually;
    else if (current_.text == "U") current_.kind = tok::until;
    else current_.kind = tok::ident;
  }

  void lex_quoted() {
    const std::size_t start = pos_;
    ++pos_;
    std::string value;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) ++pos_;
      value.push_back(text_[pos_++]);
    }
    if (pos_ >= text_.size()) throw parse_error("unterminated string", start, {"'\"'"});
    ++pos_;
    if (value.empty()) throw parse_error("empty quoted atom", start, {"atom name"});
    current_.kind = tok::quoted;
    current_.text = std::move(value);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  token current_;
};

void format_into(const formula& f, int id, std::string& out) {
  const node& n = f.at(id);
  switch (n.kind) {
    case op::truth: out += "true"; return;
    case op::falsity: out += "false"; return;
    case op::atom:
      if (is_bare_identifier(n.name)) {
        out += n.name;
      } else {
        out += '"';
        for (char c : n.name) {
          if (c == '"' || c == '\\') out += '\\';
          out += c;
        }
        out += '"';
      }
      return;
    case op::negation:
    case op::next:
    case op::always:
    case op::eventually: {
      const char* symbol = n.kind == op::negation ? "!" : n.kind == op::next ? "X" : n.kind == op::always ? "G" : "F";
      out += '(';
      out += symbol;
      out += ' ';
      format_into(f, n.left, out);
      out += ')';
      return;
    }
    case op::conjunction:
    case op::disjunction:
    case op::until: {
      const char* symbol = n.kind == op::conjunction ? " & " : n.kind == op::disjunction ? " | " : " U ";
      out += '(';
      format_into(f, n.left, out);
      out += symbol;
      format_into(f, n.right, out);
      out += ')';
      return;
    }
  }
}

}  // namespace

bool is_bare_identifier(std::string_view name) {
  if (name.empty() || !is_ident_start(name.front())) return false;
  if (!std::all_of(name.begin(), name.end(), is_ident_char)) return false;
  return !is_keyword(name);
}

formula parse_formula(std::string_view text) { return parser(text).parse(); }

std::string format_formula(const formula& f) {
  std::string out;
  format_into(f, f.root(), out);
  return out;
}

}  // namespace tempo
