#pragma once

#include <vector>

#include "hyps/symbols.hpp"

namespace hyps {

// s = sum_m fx_m * gxi_m + sum mixed.  fx_m may depend on (t, x) and gxi_m on
// (t, xi); mixed terms depend jointly on x and xi.
struct SeparableTerm {
  Expr fx;
  Expr gxi;
};

struct Decomposition {
  std::vector<SeparableTerm> terms;
  std::vector<Expr> mixed;
};

Decomposition decompose(const Expr& e, std::size_t max_terms = 64);

}  // namespace hyps
