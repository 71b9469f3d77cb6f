// Nonlinear inequality systems: expression ASTs, the input grammar, and the
// single-occurrence canonical form.
//
// A System is a set of variable domain declarations plus inequalities, each
// normalized to `term <= 0`.  canonicalize() renames every occurrence of
// every variable to a fresh variable so that no variable occurs twice across
// the whole system, recording one equivalence class per original variable.

#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "icp/interval.hpp"

namespace icp {

enum class Symbol { Add, Sub, Neg, Mul, Div, Sq, Sin };

int arity(Symbol s);
std::string_view symbol_name(Symbol s);

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  enum class Kind { Variable, Constant, Apply };

  Kind kind;
  std::string name;          // Variable
  std::string literal;       // Constant: decimal source text
  bool exact = false;        // Constant built from an exact double value
  double value = 0.0;        // the exact double when `exact`
  Symbol symbol = Symbol::Add;
  std::vector<TermPtr> args;

  static TermPtr variable(std::string name);
  static TermPtr constant(std::string literal);
  static TermPtr constant(double value);
  static TermPtr apply(Symbol s, std::vector<TermPtr> args);
};

// Tightest interval with double bounds containing the constant.
Interval constant_enclosure(const Term& t);

// Parseable rendering with minimal parentheses.
std::string render(const Term& t);

// An inequality `lhs <= 0`.
struct AtomicFormula {
  TermPtr lhs;
};

struct System {
  std::vector<std::pair<std::string, Interval>> declarations;  // source order
  std::vector<AtomicFormula> formulas;

  // Declared domain, or [-inf,+inf] for undeclared variables.
  Interval domain(const std::string& var) const;
  // Declared variables in declaration order, then undeclared ones in order
  // of first use.
  std::vector<std::string> variable_order() const;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int col, const std::string& what);
  int line;  // 1-based
  int col;   // 1-based
};

System parse_system(std::string_view text);
std::string render(const System& s);

// Occurrence count of each variable over all formula terms.
std::map<std::string, int> occurrences(const System& s);

struct CanonicalSystem {
  std::vector<AtomicFormula> formulas;  // over fresh variables, each used once
  // One class per original variable with at least one occurrence, in order
  // of first occurrence: (original name, fresh member names).
  std::vector<std::pair<std::string, std::vector<std::string>>> classes;
  Box domains;  // fresh variable -> domain inherited from its original
};

CanonicalSystem canonicalize(const System& s);

}  // namespace icp
