#pragma once

#include <memory>
#include <vector>

#include "hyps/symbols.hpp"

namespace hyps::detail {

enum : unsigned {
  kDepT = 1u,
  kDepX0 = 2u,
  kDepX1 = 4u,
  kDepXi0 = 8u,
  kDepXi1 = 16u,
};

inline unsigned dep_x(int axis) { return kDepX0 << axis; }
inline unsigned dep_xi(int axis) { return kDepXi0 << axis; }

struct Node {
  NodeKind kind = NodeKind::kConstant;
  Complex value{0.0, 0.0};
  int axis = 0;
  int exponent = 0;
  int deriv = 0;
  int bdim = 1;
  double p0 = 0.0;
  double p1 = 0.0;
  std::vector<Expr> children;
  std::shared_ptr<const Expr> source;  // mollified nodes only
  std::shared_ptr<const MollifiedData> moll;
  std::shared_ptr<const RoughCoefficient> rough;
  unsigned deps = 0;
};

// Builds the damped Fourier weights for a mollified node (regularization).
std::shared_ptr<const MollifiedData> mollified_weights(const Expr& source, double omega,
                                                       double period, int axis,
                                                       double transition_width);

// Evaluates the k-th x-derivative of a mollified coefficient at x.
double eval_mollified(const MollifiedData& data, int k, double x);

}  // namespace hyps::detail
