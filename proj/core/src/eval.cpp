#include "icp/eval.hpp"

#include <stdexcept>

namespace icp {

Interval eval_term(const Term& t, const Box& env) {
  switch (t.kind) {
    case Term::Kind::Variable: {
      auto it = env.find(t.name);
      if (it == env.end())
        throw std::invalid_argument("unbound variable: " + t.name);
      return it->second;
    }
    case Term::Kind::Constant:
      return constant_enclosure(t);
    case Term::Kind::Apply: {
      switch (t.symbol) {
        case Symbol::Add:
          return add(eval_term(*t.args[0], env), eval_term(*t.args[1], env));
        case Symbol::Sub:
          return sub(eval_term(*t.args[0], env), eval_term(*t.args[1], env));
        case Symbol::Neg:
          return neg(eval_term(*t.args[0], env));
        case Symbol::Mul:
          return mul(eval_term(*t.args[0], env), eval_term(*t.args[1], env));
        case Symbol::Div:
          return div_hull(eval_term(*t.args[0], env), eval_term(*t.args[1], env));
        case Symbol::Sq:
          return sq(eval_term(*t.args[0], env));
        case Symbol::Sin:
          return sin_ext(eval_term(*t.args[0], env));
      }
      break;
    }
  }
  throw std::logic_error("eval_term: malformed term");
}

}  // namespace icp
