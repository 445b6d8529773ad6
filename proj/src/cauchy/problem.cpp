#include <algorithm>
#include <cmath>

#include "hyps/cauchy.hpp"

namespace hyps {

GridFunction Forcing::eval(double t, const Grid& g, int d) const {
  GridFunction out = GridFunction::zeros(g);
  SymbolPoint p;
  p.t = t;
  for (std::size_t m = 0; m < phi.size(); ++m) {
    const Expr tau_d = d == 0 ? tau[m] : tau[m].derivative(d, {0, 0}, {0, 0});
    const Complex c = tau_d.eval(p);
    if (c == Complex{0.0, 0.0}) continue;
    const auto& v = phi[m].values;
    for (std::size_t j = 0; j < v.size(); ++j) out.values[j] += c * v[j];
  }
  return out;
}

void Forcing::validate(const Grid& g) const {
  if (tau.size() != phi.size()) {
    throw Error(ErrorKind::kInvalidArgument, "forcing needs one tau per phi");
  }
  for (std::size_t m = 0; m < phi.size(); ++m) {
    if (phi[m].grid != g) throw Error(ErrorKind::kGridMismatch, "forcing grid differs from g");
    if (tau[m].depends_on_any_x() || tau[m].depends_on_any_xi()) {
      throw Error(ErrorKind::kInvalidArgument, "forcing tau must depend on t only");
    }
    phi[m].check_finite();
  }
}

void CauchyProblem::validate() const {
  g.grid.validate();
  if (g.values.size() != g.grid.size()) {
    throw Error(ErrorKind::kGridMismatch, "initial data size does not match its grid");
  }
  g.check_finite();
  if (!(T > 0.0) || !std::isfinite(T)) throw Error(ErrorKind::kInvalidArgument, "T must be > 0");
  if (symbol.a1.dim != g.grid.dim || symbol.a0.dim != g.grid.dim) {
    throw Error(ErrorKind::kDimensionMismatch, "symbol dimension differs from grid dimension");
  }
  forcing.validate(g.grid);
}

SeminormOrders case_a_orders(int dim) {
  const int h = dim / 2 + 1;
  SeminormOrders o;
  o.k = 3 * h;
  o.l = 2 * (dim + 2);
  o.k0 = h;
  o.l0 = h;
  return o;
}

SeminormOrders case_b_orders(int dim) {
  SeminormOrders o;
  o.k = 1;
  o.l = dim + 2;
  o.k0 = 0;
  o.l0 = dim + 1;
  return o;
}

Calibration frozen_calibration(int dim) {
  // 1.25 x the largest ratio C_meas / (1 + Q0 + Q1) over calibration_corpus(dim),
  // rounded up to a multiple of 0.25 (largest ratios: 1.570 in 1-D, 1.480 in 2-D).
  if (dim == 1) return {2.0, 2.0};
  if (dim == 2) return {2.0, 2.0};
  throw Error(ErrorKind::kDimensionMismatch, "dimension must be 1 or 2");
}

SamplingBox default_box(const Grid& g, double T) {
  const double fmax = M_PI * g.M / g.L;
  const double xi_max = std::max(1024.0, std::exp2(std::ceil(std::log2(fmax))));
  return SamplingBox::for_domain(g.dim, g.L, std::min(g.M, 256), xi_max, T);
}

double seminorm_constant(const HyperbolicSymbol& h, const SeminormOrders& orders, double C,
                         const SamplingBox& box, double* q_a0, double* q_a1) {
  const double q1 = seminorm_Q(h.a1, 1.0, 0, orders.k, orders.l, box);
  const double q0 =
      orders.drop_a0 || h.a0.expr.is_zero() ? 0.0 : seminorm_Q(h.a0, 0.0, 0, orders.k0, orders.l0, box);
  if (q_a0) *q_a0 = q0;
  if (q_a1) *q_a1 = q1;
  return C * (1.0 + q0 + q1);
}

MeasuredConstants measure_constants(const HyperbolicSymbol& h, const Grid& g, double T,
                                    const SolveOptions& opt) {
  QuantizeOptions qo;
  qo.band_projected = opt.band_projected;
  NormOptions no = opt.norm;
  no.band_projected = opt.band_projected;
  const Quantized q1(h.a1, g, qo);
  const bool has_a0 = !h.a0.expr.is_zero();
  std::optional<Quantized> q0;
  if (has_a0) q0.emplace(h.a0, g, qo);

  MeasuredConstants mc;
  const bool t_dep = h.a1.expr.depends_on_t() || h.a0.expr.depends_on_t();
  const int ns = t_dep ? std::max(2, opt.norm_samples) : 1;
  double skew_max = 0.0, a0_max = 0.0;
  for (int i = 0; i < ns; ++i) {
    const double t = ns == 1 ? 0.0 : T * i / (ns - 1);
    mc.times.push_back(t);
    const NormResult s = adjoint_defect_norm(q1, t, no);
    mc.skew.push_back(s.value);
    mc.converged = mc.converged && s.converged;
    skew_max = std::max(skew_max, s.value);
    double a0v = 0.0;
    if (q0) {
      const NormResult r = operator_norm_only(*q0, t, no);
      mc.converged = mc.converged && r.converged;
      a0v = r.value;
    }
    mc.a0.push_back(a0v);
    a0_max = std::max(a0_max, a0v);
  }
  mc.C_meas = 1.0 + skew_max + 2.0 * a0_max;
  return mc;
}

}  // namespace hyps
