// Natural interval extension: a term evaluates to the interval image of its
// function symbol applied to the recursively evaluated arguments.

#pragma once

#include "icp/expr.hpp"
#include "icp/interval.hpp"

namespace icp {

// Throws std::invalid_argument for a variable missing from env.
Interval eval_term(const Term& t, const Box& env);
inline Interval eval_term(const TermPtr& t, const Box& env) {
  return eval_term(*t, env);
}

}  // namespace icp
