#include <cmath>

#include "hyps/regularization.hpp"

namespace hyps {

namespace {

Expr mollify(const CoefficientSpec& c, double omega, const RoughSymbolSpec& spec) {
  if (c.is_rough()) {
    const auto& r = std::get<1>(c.value);
    if (r->axis() >= spec.dim) {
      throw Error(ErrorKind::kDimensionMismatch, "rough coefficient axis exceeds dimension");
    }
    if (std::abs(r->period() - spec.period) > 1e-12 * spec.period) {
      throw Error(ErrorKind::kGridMismatch, "rough coefficient period differs from torus");
    }
    return Expr::mollified_in_x(Expr::rough(r), omega, spec.period, r->axis(),
                                spec.transition_width);
  }
  const Expr& e = std::get<0>(c.value);
  if (e.depends_on_t() || e.depends_on_any_xi()) {
    throw Error(ErrorKind::kInvalidArgument, "coefficient must depend on x only");
  }
  if (!e.depends_on_any_x()) return e;
  if (e.depends_on_x(0) && e.depends_on_x(1)) {
    throw Error(ErrorKind::kInvalidArgument,
                "smooth coefficients must depend on a single x axis to be mollified");
  }
  const int axis = e.depends_on_x(0) ? 0 : 1;
  if (axis >= spec.dim) throw Error(ErrorKind::kDimensionMismatch, "coefficient axis");
  return Expr::mollified_in_x(e, omega, spec.period, axis, spec.transition_width);
}

}  // namespace

HyperbolicSymbol regularize_symbol(const RoughSymbolSpec& spec, int k, double eps) {
  if (spec.dim < 1 || spec.dim > 2) throw Error(ErrorKind::kDimensionMismatch, "dim");
  if (static_cast<int>(spec.speeds.size()) != spec.dim) {
    throw Error(ErrorKind::kDimensionMismatch, "one speed coefficient per axis is required");
  }
  const double omega = omega_of_eps(eps, k);
  std::vector<Expr> terms;
  for (int j = 0; j < spec.dim; ++j) {
    terms.push_back(mollify(spec.speeds[j], omega, spec) * Expr::xi(j));
  }
  HyperbolicSymbol h;
  h.a1 = {Expr::sum(std::move(terms)), 1.0, spec.dim};
  h.a0 = {Expr::constant(0.0), 0.0, spec.dim};
  if (spec.lower) h.a0.expr = spec.lower_scale * mollify(*spec.lower, omega, spec);
  return h;
}

GenSymbolFamily regularized_family(const RoughSymbolSpec& spec, int k, std::vector<double> eps_grid) {
  GenSymbolFamily fam;
  fam.base = [spec, k](double eps) { return regularize_symbol(spec, k, eps); };
  fam.eps_grid = std::move(eps_grid);
  fam.mollification_k = k;
  return fam;
}

RegularizationLogTypeReport verify_log_type_of_regularization(const RoughSymbolSpec& spec, int k,
                                                              const std::vector<double>& eps_grid,
                                                              const SamplingBox& box,
                                                              const AsymptoticThresholds& th) {
  require_sweep(eps_grid, th);
  const GenSymbolFamily fam = regularized_family(spec, k, eps_grid);
  RegularizationLogTypeReport rep;
  rep.all_log_type = true;
  for (int l = 0; l <= k; ++l) {
    EpsSeries s = seminorm_series(fam, SymbolPart::kA1, 1.0, 0, 1, l, box);
    LogTypeVerdict v = classify_log_type(s, th);
    rep.orders.push_back(l);
    rep.verdicts.push_back(v);
    rep.series.push_back(std::move(s));
    rep.all_log_type = rep.all_log_type && v.is_log_type;
  }
  return rep;
}

}  // namespace hyps
