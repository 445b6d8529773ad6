#include <algorithm>
#include <cmath>

#include "hyps/cauchy.hpp"

namespace hyps {

namespace {

void require_complete(const EnergyLedger& l) {
  const std::size_t n = l.times.size();
  if (n < 2 || l.u_norm_sq.size() != n || l.f_norm_sq.size() != n) {
    throw Error(ErrorKind::kIncompleteLedger, "ledger needs >= 2 aligned time samples");
  }
  if (l.skew_norm.empty() || l.skew_norm.size() != l.a0_norm.size() ||
      l.norm_times.size() != l.skew_norm.size()) {
    throw Error(ErrorKind::kIncompleteLedger, "ledger lacks measured operator norms");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(l.times[i] > l.times[i - 1])) {
      throw Error(ErrorKind::kIncompleteLedger, "ledger times must increase");
    }
  }
}

bool dominated(const std::vector<double>& u, const std::vector<double>& bound) {
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] > bound[i] + 1e-8 * (1.0 + u[i])) return false;
  }
  return true;
}

}  // namespace

std::vector<double> gronwall_bound(const EnergyLedger& l, double C) {
  std::vector<double> out(l.times.size());
  double integral = 0.0;
  for (std::size_t i = 0; i < l.times.size(); ++i) {
    if (i > 0) integral += 0.5 * (l.times[i] - l.times[i - 1]) * (l.f_norm_sq[i] + l.f_norm_sq[i - 1]);
    out[i] = (l.g_norm_sq + integral) * std::exp(C * l.times[i]);
  }
  return out;
}

EnergyCheck check_energy_estimate(const EnergyLedger& l, double calibration_C) {
  require_complete(l);
  const std::size_t n = l.times.size();
  EnergyCheck c;
  c.ddt.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t a = i == 0 ? 0 : i - 1;
    const std::size_t b = i + 1 == n ? i : i + 1;
    c.ddt[i] = (l.u_norm_sq[b] - l.u_norm_sq[a]) / (l.times[b] - l.times[a]);
  }
  c.pointwise_ok = true;
  c.min_pointwise_margin = INFINITY;
  for (std::size_t i = 0; i < n; ++i) {
    const double rhs = l.f_norm_sq[i] + l.C_meas * l.u_norm_sq[i];
    const double margin = rhs - c.ddt[i];
    c.min_pointwise_margin = std::min(c.min_pointwise_margin, margin);
    if (margin < -1e-8 * (1.0 + l.u_norm_sq[i])) c.pointwise_ok = false;
  }
  c.bound_rhs = gronwall_bound(l, l.C_meas);
  c.margin.resize(n);
  c.min_gronwall_margin = INFINITY;
  for (std::size_t i = 0; i < n; ++i) {
    c.margin[i] = c.bound_rhs[i] - l.u_norm_sq[i];
    c.min_gronwall_margin = std::min(c.min_gronwall_margin, c.margin[i]);
  }
  c.gronwall_ok = dominated(l.u_norm_sq, c.bound_rhs);
  double Ceps = l.C_eps_seminorm;
  if (calibration_C > 0.0 && l.calibration_C > 0.0) Ceps *= calibration_C / l.calibration_C;
  c.seminorm_dominates = Ceps >= l.C_meas;
  return c;
}

CaseReport check_case_variants(const CauchyProblem& p, const SolveResult& r,
                               const SolveOptions& opt) {
  const HyperbolicSymbol& h = p.symbol;
  const Grid& g = p.grid();
  const int n = g.dim;
  const SamplingBox box = opt.box_set ? opt.box : default_box(g, p.T);
  const Calibration cal = frozen_calibration(n);
  const double Ca = opt.calibration_C > 0.0 ? opt.calibration_C : cal.case_a;
  CaseReport rep;

  // Tag checks on grid nodes, a few frequencies and both time ends.
  const SymbolExpr full = h.full();
  const std::vector<std::array<double, 2>> xis{{0.0, 0.0}, {1.0, -2.0}, {7.0, 3.0}, {-40.0, 25.0}};
  const std::vector<double> ts{0.0, p.T};
  const std::size_t stride = std::max<std::size_t>(1, g.size() / 4096);
  if (h.x_independent_outside) {
    rep.case_b_tagged = true;
    const double r0 = *h.x_independent_outside;
    rep.case_b_consistent = true;
    std::optional<std::array<double, 2>> ref;
    for (std::size_t idx = 0; idx < g.size() && rep.case_b_consistent; idx += stride) {
      const auto x = g.point(idx);
      double d2 = 0.0;
      for (int a = 0; a < n; ++a) d2 += (x[a] - 0.5 * g.L) * (x[a] - 0.5 * g.L);
      if (std::sqrt(d2) < r0) continue;
      if (!ref) {
        ref = x;
        continue;
      }
      for (double t : ts) {
        for (const auto& xi : xis) {
          const Complex v = full.expr.eval({t, x, xi});
          const Complex w = full.expr.eval({t, *ref, xi});
          if (std::abs(v - w) > 1e-12 * (1.0 + std::abs(w))) rep.case_b_consistent = false;
        }
      }
    }
    if (!rep.case_b_consistent) {
      throw Error(ErrorKind::kTagMismatch,
                  "symbol depends on x outside the declared radius r0 = " + std::to_string(r0));
    }
  }
  rep.case_c_applicable = true;
  for (std::size_t idx = 0; idx < g.size() && rep.case_c_applicable; idx += stride) {
    for (double t : ts) {
      for (const auto& xi : xis) {
        const SymbolPoint sp{t, g.point(idx), xi};
        const Complex v1 = h.a1.expr.eval(sp);
        const Complex v0 = h.a0.expr.eval(sp);
        if (std::abs(v1.imag()) > 1e-14 * std::abs(v1) ||
            std::abs(v0.imag()) > 1e-14 * std::abs(v0)) {
          rep.case_c_applicable = false;
        }
      }
    }
  }

  rep.C_case_a = r.ledger.C_eps_seminorm > 0.0 && r.ledger.calibration_C == Ca
                     ? r.ledger.C_eps_seminorm
                     : seminorm_constant(h, case_a_orders(n), Ca, box);
  const std::vector<double>& u = r.ledger.u_norm_sq;
  rep.case_a_dominates = dominated(u, gronwall_bound(r.ledger, rep.C_case_a));
  SeminormOrders parent = case_a_orders(n);
  double parent_C = Ca;
  if (rep.case_b_tagged) {
    rep.C_case_b = seminorm_constant(h, case_b_orders(n), cal.case_b, box);
    rep.case_b_dominates = dominated(u, gronwall_bound(r.ledger, rep.C_case_b));
    parent = case_b_orders(n);
    parent_C = cal.case_b;
  }
  if (rep.case_c_applicable) {
    parent.drop_a0 = true;
    rep.C_case_c = seminorm_constant(h, parent, parent_C, box);
    rep.case_c_dominates = dominated(u, gronwall_bound(r.ledger, rep.C_case_c));
  }
  if (!rep.case_b_tagged && !rep.case_c_applicable) {
    rep.note = "case (b) needs x_independent_outside and case (c) needs a real symbol";
  } else if (!rep.case_c_applicable) {
    rep.note = "case (c) not applicable: symbol is not real";
  } else if (!rep.case_b_tagged) {
    rep.note = "case (b) not tagged";
  }
  return rep;
}

std::vector<CalibrationSample> calibration_corpus(int dim) {
  std::vector<std::pair<std::string, HyperbolicSymbol>> corpus;
  const Expr x0 = Expr::x(0), xi0 = Expr::xi(0);
  const Complex I{0.0, 1.0};
  auto sym = [dim](Expr a1, Expr a0) {
    HyperbolicSymbol h;
    h.a1 = {std::move(a1), 1.0, dim};
    h.a0 = {std::move(a0), 0.0, dim};
    return h;
  };
  Grid grid;
  grid.dim = dim;
  grid.L = 2.0 * M_PI;
  if (dim == 1) {
    grid.M = 64;
    corpus.push_back({"transport", sym(xi0, Expr())});
    corpus.push_back({"sin_speed", sym((Expr::constant(2.0) + Expr::sin(x0)) * xi0, Expr())});
    corpus.push_back({"fast_speed", sym((Expr::constant(2.0) + Expr::sin(Expr::constant(3.0) * x0)) * xi0,
                                        Expr())});
    corpus.push_back({"bump_bracket",
                      sym((Expr::constant(1.0) +
                           Expr::constant(0.5) * Expr::smooth_bump(x0, M_PI, 1.5)) *
                              Expr::japanese_bracket(1.0, 1),
                          Expr())});
    corpus.push_back({"damped", sym(Expr::sin(x0) * xi0,
                                    I * (Expr::constant(-0.5) - Expr::constant(0.5) * Expr::cos(x0)))});
    corpus.push_back({"complex_a0", sym((Expr::constant(1.5) + Expr::cos(Expr::constant(2.0) * x0)) * xi0,
                                        Expr::constant(0.3) * Expr::cos(x0) +
                                            I * Expr::constant(0.5) * Expr::sin(x0))});
    corpus.push_back({"strong_damping",
                      sym(xi0, I * Expr::constant(-4.0) * (Expr::constant(1.0) +
                                                           Expr::constant(0.25) * Expr::cos(x0)))});
    corpus.push_back({"time_speed", sym((Expr::constant(1.0) +
                                         Expr::constant(0.5) * Expr::sin(x0 + Expr::t())) * xi0,
                                        Expr())});
  } else if (dim == 2) {
    grid.M = 32;
    const Expr x1 = Expr::x(1), xi1 = Expr::xi(1);
    corpus.push_back({"transport2", sym(xi0 + Expr::constant(0.5) * xi1, Expr())});
    corpus.push_back({"sin_speed2", sym((Expr::constant(2.0) + Expr::sin(x0)) * xi0 +
                                            (Expr::constant(1.5) + Expr::cos(x1)) * xi1,
                                        Expr())});
    corpus.push_back({"mixed_speed2", sym((Expr::constant(1.0) +
                                           Expr::constant(0.5) * Expr::sin(x0 + x1)) * xi0,
                                          I * Expr::constant(0.25) * Expr::cos(x1))});
    corpus.push_back({"strong_damping2", sym(xi0 - xi1, I * Expr::constant(-4.0) *
                                                            (Expr::constant(1.0) +
                                                             Expr::constant(0.25) * Expr::sin(x0)))});
  } else {
    throw Error(ErrorKind::kDimensionMismatch, "dimension must be 1 or 2");
  }
  SolveOptions opt;
  std::vector<CalibrationSample> out;
  const SamplingBox box = default_box(grid, 1.0);
  for (const auto& [name, h] : corpus) {
    CalibrationSample s;
    s.name = name;
    s.C_meas = measure_constants(h, grid, 1.0, opt).C_meas;
    s.denom_a = seminorm_constant(h, case_a_orders(dim), 1.0, box);
    s.denom_b = seminorm_constant(h, case_b_orders(dim), 1.0, box);
    out.push_back(s);
  }
  return out;
}

}  // namespace hyps
