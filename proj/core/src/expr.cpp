#include "icp/expr.hpp"

#include <cassert>
#include <cctype>
#include <cfloat>
#include <cmath>
#include <cstdint>
#include <cstdlib>

namespace icp {

int arity(Symbol s) {
  switch (s) {
    case Symbol::Add:
    case Symbol::Sub:
    case Symbol::Mul:
    case Symbol::Div:
      return 2;
    case Symbol::Neg:
    case Symbol::Sq:
    case Symbol::Sin:
      return 1;
  }
  return 0;
}

std::string_view symbol_name(Symbol s) {
  switch (s) {
    case Symbol::Add: return "add";
    case Symbol::Sub: return "sub";
    case Symbol::Neg: return "neg";
    case Symbol::Mul: return "mul";
    case Symbol::Div: return "div";
    case Symbol::Sq: return "sq";
    case Symbol::Sin: return "sin";
  }
  return "?";
}

TermPtr Term::variable(std::string name) {
  auto t = std::make_shared<Term>();
  t->kind = Kind::Variable;
  t->name = std::move(name);
  return t;
}

TermPtr Term::constant(std::string literal) {
  auto t = std::make_shared<Term>();
  t->kind = Kind::Constant;
  t->literal = std::move(literal);
  return t;
}

TermPtr Term::constant(double value) {
  assert(std::isfinite(value));
  auto t = std::make_shared<Term>();
  t->kind = Kind::Constant;
  t->literal = format_double(value);
  t->exact = true;
  t->value = value;
  return t;
}

TermPtr Term::apply(Symbol s, std::vector<TermPtr> args) {
  assert(static_cast<int>(args.size()) == arity(s));
  auto t = std::make_shared<Term>();
  t->kind = Kind::Apply;
  t->symbol = s;
  t->args = std::move(args);
  return t;
}

// ---------------------------------------------------------------------------
// Decimal literal enclosure

namespace {

using u128 = unsigned __int128;

bool mul_checked(u128 a, u128 b, u128* out) {
  return !__builtin_mul_overflow(a, b, out);
}

bool pow5_mul(u128 v, long k, u128* out) {
  for (long i = 0; i < k; ++i) {
    if (!mul_checked(v, 5, &v)) return false;
  }
  *out = v;
  return true;
}

bool shl_checked(u128 v, long k, u128* out) {
  if (k > 127) return false;
  for (long i = 0; i < k; ++i) {
    if (v >> 127) return false;
    v <<= 1;
  }
  *out = v;
  return true;
}

// Splits an (unsigned) decimal literal into significant digits and a power
// of ten: value = digits * 10^e10.
void split_literal(const std::string& lit, std::string* digits, long* e10) {
  std::string mant;
  long frac_len = 0;
  long exp10 = 0;
  std::size_t i = 0;
  for (; i < lit.size() && std::isdigit(static_cast<unsigned char>(lit[i])); ++i)
    mant += lit[i];
  if (i < lit.size() && lit[i] == '.') {
    ++i;
    for (; i < lit.size() && std::isdigit(static_cast<unsigned char>(lit[i])); ++i) {
      mant += lit[i];
      ++frac_len;
    }
  }
  if (i < lit.size() && (lit[i] == 'e' || lit[i] == 'E')) {
    exp10 = std::strtol(lit.c_str() + i + 1, nullptr, 10);
  }
  // strip leading zeros
  std::size_t nz = mant.find_first_not_of('0');
  mant = (nz == std::string::npos) ? "" : mant.substr(nz);
  // strip trailing zeros into the exponent
  long e = exp10 - frac_len;
  while (!mant.empty() && mant.back() == '0') {
    mant.pop_back();
    ++e;
  }
  *digits = mant;
  *e10 = e;
}

constexpr int kIncomparable = 2;

int cmp_u128(u128 a, u128 b) { return a == b ? 0 : (a < b ? -1 : 1); }

// Sign of digits*10^e10 - parsed, or kIncomparable when 128-bit integer
// comparison cannot decide (gigantic exponents).
int decimal_compare(const std::string& digits, long e10, double parsed) {
  if (digits.empty()) return parsed == 0.0 ? 0 : (parsed > 0.0 ? -1 : 1);
  if (parsed == 0.0) return 1;  // nonzero literal, underflowed parse
  if (!std::isfinite(parsed)) return -1;
  if (digits.size() > 19) return kIncomparable;

  u128 dec = 0;
  for (char c : digits) dec = dec * 10 + static_cast<u128>(c - '0');

  int e2 = 0;
  double frac = std::frexp(parsed, &e2);
  auto m = static_cast<u128>(static_cast<std::uint64_t>(frac * 9007199254740992.0));
  long q = e2 - 53;  // parsed = m * 2^q

  if (e10 >= 0) {
    u128 lhs;
    if (!pow5_mul(dec, e10, &lhs)) return 1;  // overflow: literal is enormous
    long d = e10 - q;  // compare lhs * 2^d with m
    if (d >= 0) {
      u128 shifted;
      if (!shl_checked(lhs, d, &shifted)) return 1;
      return cmp_u128(shifted, m);
    }
    u128 shifted;
    if (!shl_checked(m, -d, &shifted)) return -1;
    return cmp_u128(lhs, shifted);
  }
  long k = -e10;  // compare dec with m * 5^k * 2^(q+k)
  u128 rhs;
  if (!pow5_mul(m, k, &rhs)) return kIncomparable;
  long d = q + k;
  if (d >= 0) {
    u128 shifted;
    if (!shl_checked(rhs, d, &shifted)) return -1;
    return cmp_u128(dec, shifted);
  }
  u128 shifted;
  if (!shl_checked(dec, -d, &shifted)) return kIncomparable;
  return cmp_u128(shifted, rhs);
}

Interval enclose_decimal(const std::string& lit) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  double parsed = std::strtod(lit.c_str(), nullptr);
  if (std::isinf(parsed)) return Interval(DBL_MAX, parsed);  // literal overflow
  std::string digits;
  long e10 = 0;
  split_literal(lit, &digits, &e10);
  switch (decimal_compare(digits, e10, parsed)) {
    case 0:
      return Interval::point(parsed);
    case -1:  // true value just below the nearest double
      return Interval(std::nextafter(parsed, -inf), parsed);
    case 1:
      return Interval(parsed, std::nextafter(parsed, inf));
    default:
      return Interval(std::nextafter(parsed, -inf), std::nextafter(parsed, inf));
  }
}

}  // namespace

Interval constant_enclosure(const Term& t) {
  assert(t.kind == Term::Kind::Constant);
  if (t.exact) return Interval::point(t.value);
  return enclose_decimal(t.literal);
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

// Binary '-' binds tighter than binary '+', so a + b - c groups as
// a + (b - c); within a '-' chain subtraction is left-associative.
int level(const Term& t) {
  if (t.kind != Term::Kind::Apply) return 6;
  switch (t.symbol) {
    case Symbol::Add: return 1;
    case Symbol::Sub: return 2;
    case Symbol::Mul:
    case Symbol::Div: return 3;
    case Symbol::Sq: return 4;
    case Symbol::Neg: return 5;
    case Symbol::Sin: return 6;
  }
  return 6;
}

std::string render_prec(const Term& t, int min_level) {
  std::string s;
  switch (t.kind) {
    case Term::Kind::Variable: s = t.name; break;
    case Term::Kind::Constant: s = t.literal; break;
    case Term::Kind::Apply:
      switch (t.symbol) {
        case Symbol::Add:
          s = render_prec(*t.args[0], 1) + " + " + render_prec(*t.args[1], 2);
          break;
        case Symbol::Sub:
          s = render_prec(*t.args[0], 2) + " - " + render_prec(*t.args[1], 3);
          break;
        case Symbol::Mul:
          s = render_prec(*t.args[0], 3) + "*" + render_prec(*t.args[1], 4);
          break;
        case Symbol::Div:
          s = render_prec(*t.args[0], 3) + "/" + render_prec(*t.args[1], 4);
          break;
        case Symbol::Sq:
          s = render_prec(*t.args[0], 4) + "^2";
          break;
        case Symbol::Neg:
          s = "-" + render_prec(*t.args[0], 5);
          break;
        case Symbol::Sin:
          s = "sin(" + render_prec(*t.args[0], 0) + ")";
          break;
      }
      break;
  }
  if (level(t) < min_level) return "(" + s + ")";
  return s;
}

}  // namespace

std::string render(const Term& t) { return render_prec(t, 0); }

Interval System::domain(const std::string& var) const {
  for (const auto& [name, dom] : declarations) {
    if (name == var) return dom;
  }
  return Interval::entire();
}

namespace {

void collect_vars(const Term& t, std::vector<std::string>* order,
                  std::map<std::string, bool>* seen) {
  if (t.kind == Term::Kind::Variable) {
    if (!(*seen)[t.name]) {
      (*seen)[t.name] = true;
      order->push_back(t.name);
    }
    return;
  }
  for (const auto& a : t.args) collect_vars(*a, order, seen);
}

}  // namespace

std::vector<std::string> System::variable_order() const {
  std::vector<std::string> order;
  std::map<std::string, bool> seen;
  for (const auto& [name, dom] : declarations) {
    if (!seen[name]) {
      seen[name] = true;
      order.push_back(name);
    }
  }
  for (const auto& f : formulas) collect_vars(*f.lhs, &order, &seen);
  return order;
}

// ---------------------------------------------------------------------------
// Parser

ParseError::ParseError(int line_, int col_, const std::string& what_)
    : std::runtime_error(std::to_string(line_) + ":" + std::to_string(col_) +
                         ": " + what_),
      line(line_),
      col(col_) {}

namespace {

struct Token {
  enum class Type { Name, Number, Sym, End };
  Type type = Type::End;
  std::string text;
  int line = 1, col = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }

  Token next() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(line_, col_, msg);
  }

  int cur() const { return pos_ < src_.size() ? static_cast<unsigned char>(src_[pos_]) : -1; }

  void bump() {
    if (pos_ < src_.size()) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }

  void advance() {
    for (;;) {
      while (std::isspace(cur())) bump();
      if (cur() == '#') {
        while (cur() != -1 && cur() != '\n') bump();
        continue;
      }
      break;
    }
    tok_ = Token{Token::Type::End, "", line_, col_};
    int c = cur();
    if (c == -1) return;
    if (std::isalpha(c) || c == '_') {
      std::string text;
      while (std::isalnum(cur()) || cur() == '_') {
        text += static_cast<char>(cur());
        bump();
      }
      tok_ = Token{Token::Type::Name, text, tok_.line, tok_.col};
      return;
    }
    if (std::isdigit(c) || (c == '.' && pos_ + 1 < src_.size() &&
                            std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
      std::string text;
      while (std::isdigit(cur())) {
        text += static_cast<char>(cur());
        bump();
      }
      if (cur() == '.') {
        text += '.';
        bump();
        while (std::isdigit(cur())) {
          text += static_cast<char>(cur());
          bump();
        }
      }
      if (cur() == 'e' || cur() == 'E') {
        std::size_t save = pos_;
        int sline = line_, scol = col_;
        std::string ex;
        ex += static_cast<char>(cur());
        bump();
        if (cur() == '+' || cur() == '-') {
          ex += static_cast<char>(cur());
          bump();
        }
        if (std::isdigit(cur())) {
          while (std::isdigit(cur())) {
            ex += static_cast<char>(cur());
            bump();
          }
          text += ex;
        } else {
          pos_ = save;  // not an exponent; restore
          line_ = sline;
          col_ = scol;
        }
      }
      tok_ = Token{Token::Type::Number, text, tok_.line, tok_.col};
      return;
    }
    if (c == '<' || c == '>') {
      char first = static_cast<char>(c);
      bump();
      if (cur() != '=') fail(std::string("expected '=' after '") + first + "'");
      bump();
      tok_ = Token{Token::Type::Sym, std::string{first, '='}, tok_.line, tok_.col};
      return;
    }
    static const std::string singles = "=+-*/^()[],;";
    if (singles.find(static_cast<char>(c)) != std::string::npos) {
      bump();
      tok_ = Token{Token::Type::Sym, std::string(1, static_cast<char>(c)), tok_.line, tok_.col};
      return;
    }
    fail(std::string("unexpected character '") + static_cast<char>(c) + "'");
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_;
};

bool is_zero_const(const TermPtr& t) {
  if (t->kind != Term::Kind::Constant) return false;
  Interval e = constant_enclosure(*t);
  return e.is_degenerate() && e.lb() == 0.0;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : lex_(src) {}

  System parse() {
    System sys;
    while (lex_.peek().type != Token::Type::End) {
      if (lex_.peek().type == Token::Type::Name && lex_.peek().text == "var") {
        parse_decl(&sys);
      } else {
        parse_formula(&sys);
      }
    }
    return sys;
  }

 private:
  [[noreturn]] void fail(const Token& at, const std::string& msg) {
    throw ParseError(at.line, at.col, msg);
  }

  Token expect_sym(const std::string& text) {
    Token t = lex_.next();
    if (t.type != Token::Type::Sym || t.text != text)
      fail(t, "expected '" + text + "'");
    return t;
  }

  void parse_decl(System* sys) {
    lex_.next();  // var
    Token name = lex_.next();
    if (name.type != Token::Type::Name) fail(name, "expected variable name");
    check_name(name);
    Token in = lex_.next();
    if (in.type != Token::Type::Name || in.text != "in") fail(in, "expected 'in'");
    expect_sym("[");
    double lo = parse_bound();
    expect_sym(",");
    double hi = parse_bound();
    Token close = expect_sym("]");
    expect_sym(";");
    if (!(lo <= hi)) fail(close, "empty declared domain for '" + name.text + "'");
    for (const auto& [n, d] : sys->declarations) {
      if (n == name.text) fail(name, "duplicate declaration of '" + name.text + "'");
    }
    sys->declarations.emplace_back(name.text, Interval(lo, hi));
  }

  // A declaration bound, read as the nearest double (so rendered systems
  // re-parse to identical domains).
  double parse_bound() {
    bool negate = false;
    if (lex_.peek().type == Token::Type::Sym &&
        (lex_.peek().text == "-" || lex_.peek().text == "+")) {
      negate = lex_.next().text == "-";
    }
    Token t = lex_.next();
    double v;
    if (t.type == Token::Type::Name && t.text == "inf") {
      v = std::numeric_limits<double>::infinity();
    } else if (t.type == Token::Type::Number) {
      v = std::strtod(t.text.c_str(), nullptr);
    } else {
      fail(t, "expected a bound");
    }
    return negate ? -v : v;
  }

  void parse_formula(System* sys) {
    TermPtr lhs = parse_expr();
    Token rel = lex_.next();
    if (rel.type != Token::Type::Sym ||
        (rel.text != "<=" && rel.text != ">=" && rel.text != "="))
      fail(rel, "expected '<=', '>=' or '='");
    TermPtr rhs = parse_expr();
    expect_sym(";");
    if (rel.text == "<=" || rel.text == "=")
      sys->formulas.push_back({le_zero(lhs, rhs)});
    if (rel.text == ">=" || rel.text == "=")
      sys->formulas.push_back({le_zero(rhs, lhs)});
  }

  static TermPtr le_zero(const TermPtr& lhs, const TermPtr& rhs) {
    if (is_zero_const(rhs)) return lhs;
    if (is_zero_const(lhs)) return Term::apply(Symbol::Neg, {rhs});
    return Term::apply(Symbol::Sub, {lhs, rhs});
  }

  TermPtr parse_expr() {
    TermPtr t = parse_diff();
    while (lex_.peek().type == Token::Type::Sym && lex_.peek().text == "+") {
      lex_.next();
      t = Term::apply(Symbol::Add, {t, parse_diff()});
    }
    return t;
  }

  TermPtr parse_diff() {
    TermPtr t = parse_term();
    while (lex_.peek().type == Token::Type::Sym && lex_.peek().text == "-") {
      lex_.next();
      t = Term::apply(Symbol::Sub, {t, parse_term()});
    }
    return t;
  }

  TermPtr parse_term() {
    TermPtr t = parse_power();
    while (lex_.peek().type == Token::Type::Sym &&
           (lex_.peek().text == "*" || lex_.peek().text == "/")) {
      Symbol s = lex_.next().text == "*" ? Symbol::Mul : Symbol::Div;
      t = Term::apply(s, {t, parse_power()});
    }
    return t;
  }

  TermPtr parse_power() {
    TermPtr t = parse_unary();
    while (lex_.peek().type == Token::Type::Sym && lex_.peek().text == "^") {
      Token caret = lex_.next();
      Token e = lex_.next();
      if (e.type != Token::Type::Number || e.text != "2")
        fail(caret, "only '^2' is supported");
      t = Term::apply(Symbol::Sq, {t});
    }
    return t;
  }

  TermPtr parse_unary() {
    if (lex_.peek().type == Token::Type::Sym && lex_.peek().text == "-") {
      lex_.next();
      return Term::apply(Symbol::Neg, {parse_unary()});
    }
    return parse_primary();
  }

  void check_name(const Token& t) {
    if (t.text == "var" || t.text == "in" || t.text == "inf" || t.text == "sin")
      fail(t, "'" + t.text + "' is reserved");
  }

  TermPtr parse_primary() {
    Token t = lex_.next();
    if (t.type == Token::Type::Number) return Term::constant(t.text);
    if (t.type == Token::Type::Name) {
      if (t.text == "sin") {
        expect_sym("(");
        TermPtr arg = parse_expr();
        expect_sym(")");
        return Term::apply(Symbol::Sin, {arg});
      }
      check_name(t);
      return Term::variable(t.text);
    }
    if (t.type == Token::Type::Sym && t.text == "(") {
      TermPtr inner = parse_expr();
      expect_sym(")");
      return inner;
    }
    fail(t, "expected an expression");
  }

  Lexer lex_;
};

}  // namespace

System parse_system(std::string_view text) { return Parser(text).parse(); }

std::string render(const System& s) {
  std::string out;
  for (const auto& [name, dom] : s.declarations) {
    out += "var " + name + " in [" + format_double(dom.lb()) + "," +
           format_double(dom.rb()) + "];\n";
  }
  for (const auto& f : s.formulas) {
    out += render(*f.lhs) + " <= 0;\n";
  }
  return out;
}

namespace {

void count_vars(const Term& t, std::map<std::string, int>* counts) {
  if (t.kind == Term::Kind::Variable) {
    ++(*counts)[t.name];
    return;
  }
  for (const auto& a : t.args) count_vars(*a, counts);
}

}  // namespace

std::map<std::string, int> occurrences(const System& s) {
  std::map<std::string, int> counts;
  for (const auto& f : s.formulas) count_vars(*f.lhs, &counts);
  return counts;
}

namespace {

struct CanonState {
  const System* sys;
  std::map<std::string, int> counters;
  std::vector<std::string> class_order;
  std::map<std::string, std::vector<std::string>> members;
  Box domains;
};

TermPtr canon_term(const TermPtr& t, CanonState* st) {
  switch (t->kind) {
    case Term::Kind::Constant:
      return t;
    case Term::Kind::Variable: {
      int k = ++st->counters[t->name];
      if (k == 1) st->class_order.push_back(t->name);
      std::string fresh = t->name + "#" + std::to_string(k);
      st->members[t->name].push_back(fresh);
      st->domains[fresh] = st->sys->domain(t->name);
      return Term::variable(fresh);
    }
    case Term::Kind::Apply: {
      std::vector<TermPtr> args;
      args.reserve(t->args.size());
      for (const auto& a : t->args) args.push_back(canon_term(a, st));
      return Term::apply(t->symbol, std::move(args));
    }
  }
  return t;
}

}  // namespace

CanonicalSystem canonicalize(const System& s) {
  CanonState st;
  st.sys = &s;
  CanonicalSystem out;
  for (const auto& f : s.formulas) {
    out.formulas.push_back({canon_term(f.lhs, &st)});
  }
  for (const auto& orig : st.class_order) {
    out.classes.emplace_back(orig, st.members[orig]);
  }
  out.domains = std::move(st.domains);
  return out;
}

}  // namespace icp
