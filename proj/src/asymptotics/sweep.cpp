#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "hyps/asymptotics.hpp"
#include "hyps/regularization.hpp"

namespace hyps {

namespace {

// Runs job(i) for i in [0, n) on up to `jobs` threads.
template <class F>
void parallel_for(std::size_t n, int jobs, F&& job) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, jobs)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) job(i);
    });
  }
  for (auto& t : pool) t.join();
}

CauchyProblem make_problem(const SweepPlan& plan, double eps, const Grid& grid, double* log_scale) {
  CauchyProblem p;
  p.symbol = plan.family.base(eps);
  SweepData d = plan.data(eps, grid);
  p.g = std::move(d.g);
  p.forcing = std::move(d.f);
  p.T = plan.T;
  *log_scale = d.log_scale;
  return p;
}

double safe_log(double v) { return v > 0.0 ? std::log(v) : -INFINITY; }

EpsRow run_one(const SweepPlan& plan, double eps) {
  EpsRow row;
  row.eps = eps;
  const std::size_t no = plan.orders.size();
  row.log_norms.assign(no, NAN);
  row.log_predicted.assign(no, NAN);
  try {
    const CauchyProblem p = make_problem(plan, eps, plan.grid, &row.log_scale);
    const SolveResult r = solve_fixed_eps(p, plan.solve);
    row.dt = r.ledger.dt;
    row.C_meas = r.ledger.C_meas;
    row.C_eps_seminorm = r.ledger.C_eps_seminorm;
    const EnergyCheck ec = check_energy_estimate(r.ledger);
    row.energy_pointwise = ec.pointwise_ok;
    row.gronwall = ec.gronwall_ok;

    int max_d = 0, max_alpha = 0;
    for (const auto& o : plan.orders) {
      max_d = std::max(max_d, o.d);
      if (o.d == 0) max_alpha = std::max(max_alpha, order_of(o.alpha));
    }
    const TimeDerivatives td(p, max_d, plan.solve.band_projected);
    std::vector<double> best(no, 0.0);
    for (std::size_t s = 0; s < r.trajectory.states.size(); ++s) {
      const auto w = td.eval(r.trajectory.times[s], r.trajectory.states[s], max_d);
      for (std::size_t i = 0; i < no; ++i) {
        const auto& o = plan.orders[i];
        const GridFunction v = spectral_derivative(w[static_cast<std::size_t>(o.d)], o.alpha);
        best[i] = std::max(best[i], v.norm());
      }
    }
    for (std::size_t i = 0; i < no; ++i) row.log_norms[i] = safe_log(best[i]) + row.log_scale;
    if (plan.cascade) {
      const auto cas = derivative_cascade(p, r, max_alpha, plan.solve);
      for (std::size_t i = 0; i < no; ++i) {
        const auto& o = plan.orders[i];
        if (o.d != 0) continue;
        for (const auto& c : cas) {
          if (c.alpha != o.alpha) continue;
          const double mb = *std::max_element(c.bound_rhs.begin(), c.bound_rhs.end());
          row.log_predicted[i] = 0.5 * safe_log(mb) + row.log_scale;
        }
      }
    }
    row.ok = true;
  } catch (const std::exception& e) {
    row.ok = false;
    row.error = e.what();
  }
  return row;
}

}  // namespace

void SweepPlan::validate() const {
  grid.validate();
  if (!family.base) throw Error(ErrorKind::kInvalidArgument, "sweep plan has no symbol family");
  if (!data) throw Error(ErrorKind::kInvalidArgument, "sweep plan has no data builder");
  if (family.eps_grid.empty()) throw Error(ErrorKind::kInsufficientSweep, "empty eps grid");
  for (double e : family.eps_grid) {
    if (!(e > 0.0 && e <= 1.0)) throw Error(ErrorKind::kBadEps, "eps must lie in (0, 1]");
  }
  require_sweep(family.eps_grid, thresholds);
  if (orders.empty()) throw Error(ErrorKind::kInsufficientOrders, "no derivative orders tracked");
  for (const auto& o : orders) {
    if (o.d < 0 || o.alpha[0] < 0 || o.alpha[1] < 0 || (grid.dim == 1 && o.alpha[1] != 0)) {
      throw Error(ErrorKind::kInvalidArgument, "invalid derivative order");
    }
  }
  if (!(T > 0.0)) throw Error(ErrorKind::kInvalidArgument, "T must be > 0");
}

SweepReport run_sweep(const SweepPlan& plan) {
  plan.validate();
  const auto& eps = plan.family.eps_grid;
  SweepReport rep;
  rep.orders = plan.orders;
  rep.rows.resize(eps.size());
  parallel_for(eps.size(), plan.jobs, [&](std::size_t i) { rep.rows[i] = run_one(plan, eps[i]); });

  rep.complete = true;
  rep.gronwall_consistent = true;
  rep.energy_pointwise = true;
  std::vector<double> ok_eps, cm;
  for (const auto& r : rep.rows) {
    if (!r.ok) {
      rep.complete = false;
      continue;
    }
    ok_eps.push_back(r.eps);
    cm.push_back(r.C_meas);
    rep.gronwall_consistent = rep.gronwall_consistent && r.gronwall;
    rep.energy_pointwise = rep.energy_pointwise && r.energy_pointwise;
  }
  if (ok_eps.size() >= static_cast<std::size_t>(plan.thresholds.min_points)) {
    try {
      rep.c_meas_fit = classify_log_type(EpsSeries{ok_eps, cm}, plan.thresholds);
    } catch (const Error&) {
      rep.c_meas_fit = {};
    }
  }
  for (std::size_t k = 0; k < plan.orders.size(); ++k) {
    OrderFit f;
    f.order = plan.orders[k];
    std::vector<double> e, y, yp;
    bool pred = true;
    for (const auto& r : rep.rows) {
      if (!r.ok) continue;
      e.push_back(r.eps);
      y.push_back(r.log_norms[k]);
      yp.push_back(r.log_predicted[k]);
      pred = pred && std::isfinite(r.log_predicted[k]);
    }
    const bool all_finite = std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); });
    if (e.size() >= 2 && all_finite) {
      const ExponentFit fe = fit_exponent(e, y);
      f.N_hat = fe.slope;
      f.se = fe.se;
      f.intercept = fe.intercept;
      f.lo = fe.slope - 2.0 * fe.se;
      f.hi = fe.slope + 2.0 * fe.se;
      f.finite = std::isfinite(fe.slope);
      if (pred && !yp.empty()) {
        f.N_pred = fit_exponent(e, yp).slope;
        f.below_prediction = f.N_hat <= f.N_pred;
      }
    }
    rep.fits.push_back(f);
  }
  return rep;
}

AssociationReference high_resolution_reference(const SweepPlan& plan, int factor) {
  plan.validate();
  Grid fine = plan.grid;
  fine.M *= factor;
  const double eps = *std::min_element(plan.family.eps_grid.begin(), plan.family.eps_grid.end());
  double log_scale = 0.0;
  const CauchyProblem p = make_problem(plan, eps, fine, &log_scale);
  SolveOptions opt = plan.solve;
  opt.compute_seminorm = false;
  const CauchyProblem coarse = make_problem(plan, eps, plan.grid, &log_scale);
  opt.dt = plan_steps(coarse, plan.solve).dt / factor;
  opt.override_stability = true;
  const SolveResult r = solve_fixed_eps(p, opt);
  AssociationReference ref;
  GridFunction u = r.trajectory.states.back();
  const double s = std::exp(log_scale);
  for (auto& z : u.values) z *= s;
  ref.u_ref = std::move(u);
  return ref;
}

namespace {

Complex pairing(const GridFunction& u, const Probe& probe) {
  const GridFunction phi = GridFunction::sample(u.grid, probe.phi);
  return inner(u, phi);
}

// |u - ref|_{L2} through Fourier coefficients; modes of ref missing from u count fully.
double l2_distance(const GridFunction& u, const GridFunction& ref) {
  const auto cu = fourier_coefficients(u);
  const auto cr = fourier_coefficients(ref);
  const Grid& gu = u.grid;
  const Grid& gr = ref.grid;
  std::vector<Complex> diff = cr;
  for (std::size_t k = 0; k < gu.size(); ++k) {
    int m0, m1 = 0;
    if (gu.dim == 1) {
      m0 = gu.mode(static_cast<int>(k));
    } else {
      m0 = gu.mode(static_cast<int>(k / gu.M));
      m1 = gu.mode(static_cast<int>(k % gu.M));
    }
    auto wrap = [&](int m) { return m < 0 ? m + gr.M : m; };
    const std::size_t kr = gu.dim == 1 ? static_cast<std::size_t>(wrap(m0))
                                       : static_cast<std::size_t>(wrap(m0)) * gr.M + wrap(m1);
    diff[kr] -= cu[k];
  }
  double s = 0.0;
  for (const auto& z : diff) s += std::norm(z);
  return std::sqrt(s * std::pow(gr.L, gr.dim));
}

}  // namespace

AssociationReport check_association(const SweepPlan& plan, const std::vector<Probe>& probes,
                                    const AssociationReference& ref, double terminal_tol) {
  plan.validate();
  if (probes.empty()) throw Error(ErrorKind::kInvalidArgument, "association needs probes");
  AssociationReport rep;
  if (ref.exact_pairings) {
    if (ref.exact_pairings->size() != probes.size()) {
      throw Error(ErrorKind::kInvalidArgument, "one exact pairing per probe required");
    }
    rep.reference_pairings = *ref.exact_pairings;
  } else if (ref.u_ref) {
    const Grid& gr = ref.u_ref->grid;
    if (gr.dim != plan.grid.dim || gr.L != plan.grid.L || gr.M < plan.grid.M) {
      throw Error(ErrorKind::kGridMismatch, "reference grid does not refine the sweep grid");
    }
    for (const auto& pr : probes) rep.reference_pairings.push_back(pairing(*ref.u_ref, pr));
  } else {
    throw Error(ErrorKind::kInvalidArgument, "association needs a reference");
  }

  std::vector<double> eps = plan.family.eps_grid;
  std::sort(eps.begin(), eps.end(), std::greater<>());
  rep.eps = eps;
  std::vector<GridFunction> finals(eps.size());
  std::vector<std::string> errors(eps.size());
  parallel_for(eps.size(), plan.jobs, [&](std::size_t i) {
    try {
      double log_scale = 0.0;
      const CauchyProblem p = make_problem(plan, eps[i], plan.grid, &log_scale);
      SolveOptions opt = plan.solve;
      opt.compute_seminorm = false;
      GridFunction u = solve_fixed_eps(p, opt).trajectory.states.back();
      const double s = std::exp(log_scale);
      for (auto& z : u.values) z *= s;
      finals[i] = std::move(u);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!errors[i].empty()) throw Error(ErrorKind::kInvalidArgument, "association solve failed: " + errors[i]);
  }
  rep.residuals.assign(probes.size(), {});
  for (std::size_t j = 0; j < probes.size(); ++j) {
    for (std::size_t i = 0; i < eps.size(); ++i) {
      rep.residuals[j].push_back(std::abs(pairing(finals[i], probes[j]) - rep.reference_pairings[j]));
    }
  }
  if (ref.u_ref) {
    for (const auto& u : finals) rep.l2_residuals.push_back(l2_distance(u, *ref.u_ref));
  }
  const std::size_t n = eps.size();
  rep.nonincreasing_tail = n >= 3;
  rep.terminal_residual = 0.0;
  for (const auto& r : rep.residuals) {
    for (std::size_t i = (n >= 3 ? n - 2 : 1); i < n; ++i) {
      if (r[i] > r[i - 1] * (1.0 + 1e-9) + 1e-13) rep.nonincreasing_tail = false;
    }
    rep.terminal_residual = std::max(rep.terminal_residual, r.back());
  }
  rep.terminal_ok = rep.terminal_residual <= terminal_tol;
  return rep;
}

NegligibleVerdict check_negligible(const SweepPlan& plan, int q_max) {
  SweepPlan p = plan;
  p.orders = {{0, {0, 0}}};
  p.cascade = false;
  return check_negligible(run_sweep(p), q_max);
}

}  // namespace hyps
