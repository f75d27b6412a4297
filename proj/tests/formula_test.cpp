#include <cctype>
#include <random>
#include <set>

#include "doctest.h"
#include "support.hpp"
#include "tempo/bench.hpp"
#include "tempo/error.hpp"
#include "tempo/formula.hpp"

using namespace tempo;

namespace {

// Precedence-table parenthesizer, independent of the library parser. Works on
// whitespace-separated-or-not inputs made of bare identifiers and operators.
struct parenthesizer {
  std::vector<std::string> toks;
  std::size_t pos = 0;

  explicit parenthesizer(const std::string& s) {
    for (std::size_t i = 0; i < s.size();) {
      if (std::isspace(static_cast<unsigned char>(s[i]))) {
        ++i;
      } else if (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_') {
        std::size_t j = i;
        while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
        toks.push_back(s.substr(i, j - i));
        i = j;
      } else {
        toks.push_back(std::string(1, s[i++]));
      }
    }
  }

  const std::string& peek() const {
    static const std::string end;
    return pos < toks.size() ? toks[pos] : end;
  }

  std::string disj() {
    std::string l = conj();
    while (peek() == "|") {
      ++pos;
      l = "(" + l + " | " + conj() + ")";
    }
    return l;
  }
  std::string conj() {
    std::string l = until_();
    while (peek() == "&") {
      ++pos;
      l = "(" + l + " & " + until_() + ")";
    }
    return l;
  }
  std::string until_() {
    std::string l = unary();
    if (peek() == "U") {
      ++pos;
      return "(" + l + " U " + until_() + ")";
    }
    return l;
  }
  std::string unary() {
    const std::string t = peek();
    if (t == "!" || t == "X" || t == "G" || t == "F") {
      ++pos;
      return "(" + t + " " + unary() + ")";
    }
    if (t == "(") {
      ++pos;
      std::string inner = disj();
      ++pos;  // ')'
      return inner;
    }
    ++pos;
    return t;
  }
};

std::string reference_parenthesize(const std::string& s) {
  parenthesizer p(s);
  return p.disj();
}

formula random_ast(std::mt19937_64& gen, int depth) {
  static const std::vector<std::string> names = {"a", "b", "car", "hand clap", "U", "x_1", "say \"hi\""};
  if (depth == 0 || gen() % 4 == 0) {
    switch (gen() % 8) {
      case 0: return formula::top();
      case 1: return formula::bottom();
      default: return formula::atom(names[gen() % names.size()]);
    }
  }
  return testing::random_formula(gen, {"a", "b", "hand clap"}, depth);
}

}  // namespace

TEST_CASE("parse simple operators") {
  const formula f = parse_formula("G car");
  REQUIRE(f.size() == 2);
  CHECK(f.at(f.root()).kind == op::always);
  CHECK(f.at(f.at(f.root()).left).kind == op::atom);
  CHECK(f.at(0).name == "car");
  CHECK(f == always(formula::atom("car")));
}

TEST_CASE("parse conjunction under until") {
  const formula f = parse_formula("(car & person) U truck");
  CHECK(f == until(formula::atom("car") & formula::atom("person"), formula::atom("truck")));
}

TEST_CASE("prefix operators bind before until") {
  CHECK(parse_formula("!a U F b") == until(!formula::atom("a"), eventually(formula::atom("b"))));
  CHECK(parse_formula("! a U b") == until(!formula::atom("a"), formula::atom("b")));
  CHECK(parse_formula("a U b & c") == (until(formula::atom("a"), formula::atom("b")) & formula::atom("c")));
  CHECK(parse_formula("a U b U c") == until(formula::atom("a"), until(formula::atom("b"), formula::atom("c"))));
  CHECK(parse_formula("a | b & c") == (formula::atom("a") | (formula::atom("b") & formula::atom("c"))));
  CHECK(parse_formula("a & b & c") == ((formula::atom("a") & formula::atom("b")) & formula::atom("c")));
  CHECK(parse_formula("G F X !a") == always(eventually(next(!formula::atom("a")))));
}

TEST_CASE("parser agrees with a reference parenthesizer") {
  const std::vector<std::string> inputs = {
      "!a U F b",          "a U b & c",       "a & b | c & d",  "G a U b",        "a U G b | c",    "F G a & G F b",
      "(a | b) U c U d",   "!(a & b) U !c",   "X X a U b",      "a | b | c",      "G (a & b)",      "(a & b) U F c",
      "!a U G b",          "a U (b | c) & d", "F (a U b)",      "a & (b U c) | d", "!!a",           "X (a | b) U (c & d)",
  };
  for (const auto& text : inputs) {
    CAPTURE(text);
    CHECK(format_formula(parse_formula(text)) == reference_parenthesize(text));
  }
}

TEST_CASE("format canonical text") {
  CHECK(format_formula(always(formula::atom("car"))) == "(G car)");
  CHECK(format_formula(until(formula::atom("a"), !formula::atom("b"))) == "(a U (! b))");
  CHECK(format_formula(formula::atom("hand clap")) == "\"hand clap\"");
  CHECK(format_formula(formula::atom("U")) == "\"U\"");
  CHECK(format_formula(formula::top() & formula::bottom()) == "(true & false)");
}

TEST_CASE("quoted atoms and escapes") {
  CHECK(parse_formula("F \"hand clap\"") == eventually(formula::atom("hand clap")));
  CHECK(parse_formula(R"("say \"hi\"")") == formula::atom("say \"hi\""));
  CHECK(parse_formula("\"true\"") == formula::atom("true"));
  CHECK(parse_formula("true") == formula::top());
}

TEST_CASE("catalog templates round-trip") {
  const std::vector<std::string> atoms = {"p1", "p2", "p3"};
  for (const auto& t : template_catalog()) {
    CAPTURE(t.name);
    const formula f = t.instantiate(std::span<const std::string>(atoms.data(), t.arity()));
    CHECK(parse_formula(format_formula(f)) == f);
  }
}

TEST_CASE("random ASTs round-trip") {
  std::mt19937_64 gen(7);
  for (int i = 0; i < 2000; ++i) {
    const formula f = random_ast(gen, static_cast<int>(gen() % 9));
    const std::string text = format_formula(f);
    CAPTURE(text);
    REQUIRE(parse_formula(text) == f);
    REQUIRE(format_formula(parse_formula(text)) == text);
  }
}

TEST_CASE("node ids are post-order and dense") {
  std::mt19937_64 gen(11);
  for (int i = 0; i < 200; ++i) {
    const formula f = random_ast(gen, 6);
    std::set<int> children;
    for (int id = 0; id < static_cast<int>(f.size()); ++id) {
      const auto& n = f.at(id);
      CHECK(arity(n.kind) == (n.left >= 0) + (n.right >= 0));
      if (n.left >= 0) {
        CHECK(n.left < id);
        CHECK(children.insert(n.left).second);
      }
      if (n.right >= 0) {
        CHECK(n.right < id);
        CHECK(children.insert(n.right).second);
      }
    }
    // Every node except the root is the child of exactly one node.
    CHECK(children.size() == f.size() - 1);
    CHECK(!children.count(f.root()));
  }
}

TEST_CASE("atoms, depth and subformulas") {
  const formula f = parse_formula("(car & person) U F car");
  CHECK(f.atoms() == std::vector<std::string>{"car", "person"});
  CHECK(f.depth() == 2);
  CHECK(f.subformula(f.at(f.root()).right) == eventually(formula::atom("car")));
  const formula renamed = f.rename_atoms([](const std::string& n) { return n == "car" ? std::string("bus") : std::string(); });
  CHECK(format_formula(renamed) == "((bus & person) U (F bus))");
}

TEST_CASE("syntax errors") {
  auto offset_of = [](const std::string& text) -> std::size_t {
    try {
      parse_formula(text);
    } catch (const parse_error& e) {
      return e.offset();
    }
    return std::string::npos;
  };
  CHECK_THROWS_AS(parse_formula(""), parse_error);
  CHECK_THROWS_AS(parse_formula("   "), parse_error);
  CHECK_THROWS_AS(parse_formula("\"open"), parse_error);
  CHECK_THROWS_AS(parse_formula("\"\""), parse_error);
  CHECK_THROWS_AS(parse_formula("a b"), parse_error);
  CHECK_THROWS_AS(parse_formula("a $ b"), parse_error);
  CHECK_THROWS_AS(parse_formula("G"), parse_error);
  CHECK(offset_of("G (car") == 6);
  CHECK(offset_of("a & ") == 4);
  CHECK(offset_of("a )") == 2);
  try {
    parse_formula("a &");
  } catch (const parse_error& e) {
    CHECK(!e.expected().empty());
  }
  CHECK_THROWS_AS(formula::atom(""), contract_error);
}
