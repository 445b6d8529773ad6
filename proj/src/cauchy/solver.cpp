#include <algorithm>
#include <cmath>

#include "hyps/cauchy.hpp"

namespace hyps {

namespace {

std::vector<double> sample_times(double T, int n, bool t_dep) {
  if (!t_dep) return {0.0};
  n = std::max(2, n);
  std::vector<double> ts(n);
  for (int i = 0; i < n; ++i) ts[i] = T * i / (n - 1);
  return ts;
}

double sq_norm(const std::vector<Complex>& v, double cell) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return s * cell;
}

void check_values(const std::vector<Complex>& v, double t) {
  for (const auto& z : v) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw Error(ErrorKind::kNonFinite, "solution became non-finite at t = " + std::to_string(t));
    }
  }
}

StepPlan plan_steps(const Quantized& full, const CauchyProblem& p, const SolveOptions& opt) {
  const HyperbolicSymbol& h = p.symbol;
  const bool t_dep = h.a1.expr.depends_on_t() || h.a0.expr.depends_on_t();
  StepPlan sp;
  double S = 0.0;
  for (double t : sample_times(p.T, opt.symbol_sup_samples, t_dep)) S = std::max(S, full.symbol_sup(t));
  sp.symbol_sup = S;
  if (opt.dt) {
    double dt = *opt.dt;
    if (!(dt > 0.0)) throw Error(ErrorKind::kInvalidArgument, "dt must be > 0");
    if (dt * S > opt.stability_margin && !opt.override_stability) {
      throw Error(ErrorKind::kUnstableStep, "dt * S = " + std::to_string(dt * S) +
                                                " exceeds the RK4 margin " +
                                                std::to_string(opt.stability_margin));
    }
    int steps = static_cast<int>(std::llround(p.T / dt));
    if (std::abs(steps * dt - p.T) > 1e-9 * p.T) steps = static_cast<int>(std::ceil(p.T / dt));
    sp.steps = std::max(steps, 1);
  } else {
    const double dt0 = S > 0.0 ? opt.safety * opt.stability_margin / S : 0.1;
    sp.steps = std::max(1, static_cast<int>(std::ceil(p.T / dt0 - 1e-12)));
  }
  sp.dt = p.T / sp.steps;
  return sp;
}

}  // namespace

StepPlan plan_steps(const CauchyProblem& p, const SolveOptions& opt) {
  p.validate();
  QuantizeOptions qo;
  qo.band_projected = opt.band_projected;
  const Quantized full(p.symbol.full(), p.grid(), qo);
  return plan_steps(full, p, opt);
}

SolveResult solve_fixed_eps(const CauchyProblem& p, const SolveOptions& opt) {
  p.validate();
  const Grid& grid = p.grid();
  const HyperbolicSymbol& h = p.symbol;
  const bool band = opt.band_projected;
  const std::size_t n = grid.size();
  const double cell = std::pow(grid.dx(), grid.dim);

  QuantizeOptions qo;
  qo.band_projected = band;
  const Quantized full(h.full(), grid, qo);

  // Forcing terms and data restricted to the generator's subspace.
  Forcing forcing = p.forcing;
  for (auto& phi : forcing.phi) {
    if (band) phi = band_project(phi);
  }
  const GridFunction g0 = band ? band_project(p.g) : p.g;

  const StepPlan sp = plan_steps(full, p, opt);
  const double dt = sp.dt;
  const int steps = sp.steps;
  const double S = sp.symbol_sup;

  SolveResult res;
  EnergyLedger& L = res.ledger;
  L.dt = dt;
  L.symbol_sup = S;
  const MeasuredConstants mc = measure_constants(h, grid, p.T, opt);
  L.norm_times = mc.times;
  L.skew_norm = mc.skew;
  L.a0_norm = mc.a0;
  L.C_meas = mc.C_meas;
  L.norms_converged = mc.converged;
  L.calibration_C = opt.calibration_C > 0.0 ? opt.calibration_C : frozen_calibration(grid.dim).case_a;
  if (opt.compute_seminorm) {
    const SamplingBox box = opt.box_set ? opt.box : default_box(grid, p.T);
    L.C_eps_seminorm =
        seminorm_constant(h, case_a_orders(grid.dim), L.calibration_C, box, &L.q_a0, &L.q_a1);
  }

  Trajectory& tr = res.trajectory;
  tr.grid = grid;
  tr.dt = dt;
  tr.stride = opt.store_full ? 1 : std::max(1, opt.stride);

  std::vector<Complex> u = g0.values, k1(n), k2(n), k3(n), k4(n), tmp(n), work(n);
  const bool forced = !forcing.empty();
  auto forcing_at = [&](double t) { return forcing.eval(t, grid).values; };

  // rhs = -i A(t) v + f(t)
  auto rhs = [&](double t, const std::vector<Complex>& v, const std::vector<Complex>* f,
                 std::vector<Complex>& out) {
    full.apply(t, v.data(), work.data());
    for (std::size_t i = 0; i < n; ++i) out[i] = Complex(work[i].imag(), -work[i].real());
    if (f) {
      for (std::size_t i = 0; i < n; ++i) out[i] += (*f)[i];
    }
  };

  L.g_norm_sq = sq_norm(u, cell);
  std::vector<Complex> f0 = forced ? forcing_at(0.0) : std::vector<Complex>{};
  L.times.push_back(0.0);
  L.u_norm_sq.push_back(L.g_norm_sq);
  L.f_norm_sq.push_back(forced ? sq_norm(f0, cell) : 0.0);
  tr.times.push_back(0.0);
  tr.states.push_back({grid, u});

  double f_integral = 0.0;
  for (int s = 0; s < steps; ++s) {
    const double t = s * dt;
    std::vector<Complex> fh, f1;
    if (forced) {
      fh = forcing_at(t + 0.5 * dt);
      f1 = forcing_at(t + dt);
    }
    rhs(t, u, forced ? &f0 : nullptr, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = u[i] + 0.5 * dt * k1[i];
    rhs(t + 0.5 * dt, tmp, forced ? &fh : nullptr, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = u[i] + 0.5 * dt * k2[i];
    rhs(t + 0.5 * dt, tmp, forced ? &fh : nullptr, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = u[i] + dt * k3[i];
    rhs(t + dt, tmp, forced ? &f1 : nullptr, k4);
    for (std::size_t i = 0; i < n; ++i) {
      u[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    const double t1 = (s + 1 == steps) ? p.T : (s + 1) * dt;
    check_values(u, t1);

    const double un = sq_norm(u, cell);
    const double fn = forced ? sq_norm(f1, cell) : 0.0;
    f_integral += 0.5 * dt * (L.f_norm_sq.back() + fn);
    const double bound = (L.g_norm_sq + f_integral) * std::exp(L.C_meas * t1);
    if (un > opt.unstable_factor * bound * (1.0 + 1e-12) + 1e-300) {
      throw Error(ErrorKind::kUnstableStep,
                  "|u|^2 = " + std::to_string(un) + " exceeds " +
                      std::to_string(opt.unstable_factor) + " x Gronwall bound " +
                      std::to_string(bound) + " at t = " + std::to_string(t1));
    }
    L.times.push_back(t1);
    L.u_norm_sq.push_back(un);
    L.f_norm_sq.push_back(fn);
    if ((s + 1) % tr.stride == 0 || s + 1 == steps) {
      tr.times.push_back(t1);
      tr.states.push_back({grid, u});
    }
    if (forced) f0 = std::move(f1);
  }
  return res;
}

}  // namespace hyps
