#include <cmath>
#include <cstdio>
#include <filesystem>

#include <doctest.h>

#include "hyps/cauchy.hpp"

using namespace hyps;

namespace {

const Expr x0 = Expr::x(0);
const Expr xi0 = Expr::xi(0);
const Complex I{0.0, 1.0};

HyperbolicSymbol symbol(Expr a1, Expr a0 = Expr(), int dim = 1) {
  HyperbolicSymbol h;
  h.a1 = {std::move(a1), 1.0, dim};
  h.a0 = {std::move(a0), 0.0, dim};
  return h;
}

GridFunction smooth_data(const Grid& g) {
  return GridFunction::sample(g, [](const std::array<double, 2>& x) {
    return Complex(std::exp(std::cos(x[0])), 0.3 * std::sin(2 * x[0]));
  });
}

CauchyProblem problem(HyperbolicSymbol h, GridFunction g, double T = 1.0) {
  CauchyProblem p;
  p.symbol = std::move(h);
  p.g = std::move(g);
  p.T = T;
  return p;
}

// Exact constant-speed transport: multiply each Fourier coefficient by exp(-i c t xi).
GridFunction shifted(const GridFunction& g, double c, double t) {
  std::vector<Complex> coef = fourier_coefficients(g);
  for (std::size_t k = 0; k < coef.size(); ++k) coef[k] *= std::polar(1.0, -c * t * g.grid.frequency(static_cast<int>(k)));
  return from_fourier(g.grid, coef);
}

const GridFunction& final_state(const SolveResult& r) { return r.trajectory.states.back(); }

SolveOptions fast() {
  SolveOptions o;
  o.compute_seminorm = false;
  return o;
}

}  // namespace

TEST_CASE("constant-speed transport matches the exact phase shift") {
  const Grid g{1, 256, 2 * M_PI};
  SolveOptions o = fast();
  o.dt = 1e-3;
  const double c = 1.0;
  const SolveResult r = solve_fixed_eps(problem(symbol(c * xi0), smooth_data(g)), o);
  CHECK(r.trajectory.times.back() == doctest::Approx(1.0));
  CHECK(max_abs_diff(final_state(r), shifted(smooth_data(g), c, 1.0)) <= 1e-6);
}

TEST_CASE("RK4 error drops by 16 per halving of dt") {
  const Grid g{1, 64, 2 * M_PI};
  std::vector<double> err;
  for (double dt : {0.05, 0.025, 0.0125}) {
    SolveOptions o = fast();
    o.dt = dt;
    const SolveResult r = solve_fixed_eps(problem(symbol(xi0), smooth_data(g)), o);
    err.push_back(max_abs_diff(final_state(r), shifted(smooth_data(g), 1.0, 1.0)));
  }
  for (std::size_t i = 0; i + 1 < err.size(); ++i) {
    CAPTURE(err[i]);
    const double ratio = err[i] / err[i + 1];
    CHECK(ratio >= 16.0 * 0.8);
    CHECK(ratio <= 16.0 * 1.2);
  }
}

TEST_CASE("x-independent real symbols give unitary evolution") {
  const Grid g{1, 128, 2 * M_PI};
  const Expr a = Expr::japanese_bracket(1.0, 1) + 0.5 * xi0;
  SolveOptions o = fast();
  o.dt = 1e-3;
  const SolveResult r = solve_fixed_eps(problem(symbol(a), smooth_data(g), 2.0), o);
  const double n0 = r.ledger.u_norm_sq.front();
  double drift = 0.0;
  for (double v : r.ledger.u_norm_sq) drift = std::max(drift, std::abs(std::sqrt(v) - std::sqrt(n0)));
  CHECK(drift / 2.0 <= 1e-10);
}

TEST_CASE("default-step norm loss is the RK4 amplification factor") {
  // Each Fourier mode is multiplied per step by R(-i dt a(xi)), R the RK4 polynomial.
  const Grid g{1, 64, 2 * M_PI};
  const Expr a = Expr::japanese_bracket(1.0, 1) + 0.5 * xi0;
  const CauchyProblem p = problem(symbol(a), smooth_data(g));
  const SolveResult r = solve_fixed_eps(p, fast());
  const double dt = r.ledger.dt;
  const std::vector<Complex> c = fourier_coefficients(p.g);
  for (std::size_t i = 0; i < r.ledger.times.size(); ++i) {
    const int steps = static_cast<int>(std::llround(r.ledger.times[i] / dt));
    double expect = 0.0;
    for (int k = 0; k < g.M; ++k) {
      double amp = 1.0;
      if (g.in_band(static_cast<std::size_t>(k))) {
        const double xi = g.frequency(k);
        const Complex z(0.0, -dt * (std::sqrt(1 + xi * xi) + 0.5 * xi));
        amp = std::pow(std::abs(1.0 + z + z * z / 2.0 + z * z * z / 6.0 + z * z * z * z / 24.0), 2 * steps);
      }
      expect += std::norm(c[k]) * amp * g.L;
    }
    CHECK(r.ledger.u_norm_sq[i] == doctest::Approx(expect).epsilon(1e-12));
  }
  CHECK(r.ledger.u_norm_sq.back() < r.ledger.u_norm_sq.front());
}

TEST_CASE("zero data stays exactly zero") {
  const Grid g{1, 64, 2 * M_PI};
  const SolveResult r = solve_fixed_eps(
      problem(symbol((Expr::constant(2.0) + Expr::sin(x0)) * xi0, I * Expr::cos(x0)), GridFunction::zeros(g)), fast());
  for (const auto& s : r.trajectory.states) {
    for (const Complex& v : s.values) {
      CHECK(v.real() == 0.0);
      CHECK(v.imag() == 0.0);
    }
  }
  for (double v : r.ledger.u_norm_sq) CHECK(v == 0.0);
}

TEST_CASE("solution map is linear") {
  const Grid g{1, 64, 2 * M_PI};
  const HyperbolicSymbol h = symbol((Expr::constant(1.5) + Expr::cos(x0)) * xi0, 0.2 * Expr::sin(x0));
  const GridFunction g1 = smooth_data(g);
  const GridFunction g2 = GridFunction::sample(g, [](const std::array<double, 2>& x) {
    return Complex(std::sin(3 * x[0]), std::cos(x[0]));
  });
  const Complex a{0.7, -1.2}, b{-2.0, 0.4};
  GridFunction mix = g1;
  for (std::size_t i = 0; i < mix.values.size(); ++i) mix.values[i] = a * g1.values[i] + b * g2.values[i];
  const GridFunction u1 = final_state(solve_fixed_eps(problem(h, g1), fast()));
  const GridFunction u2 = final_state(solve_fixed_eps(problem(h, g2), fast()));
  GridFunction comb = u1;
  for (std::size_t i = 0; i < comb.values.size(); ++i) comb.values[i] = a * u1.values[i] + b * u2.values[i];
  CHECK(max_abs_diff(final_state(solve_fixed_eps(problem(h, mix), fast())), comb) <= 1e-10);
}

TEST_CASE("forward then backward returns the data") {
  const Grid g{1, 64, 2 * M_PI};
  const Expr a = (Expr::constant(2.0) + Expr::sin(x0)) * xi0;
  SolveOptions o = fast();
  o.dt = 1e-3;
  const GridFunction g0 = smooth_data(g);
  const GridFunction uT = final_state(solve_fixed_eps(problem(symbol(a), g0), o));
  const GridFunction back = final_state(solve_fixed_eps(problem(symbol(-1.0 * a), uT), o));
  CHECK(max_abs_diff(back, g0) <= 1e-8);
}

TEST_CASE("energy check on constant-speed transport") {
  const Grid g{1, 64, 2 * M_PI};
  SolveOptions o = fast();
  o.dt = 1e-3;
  const SolveResult r = solve_fixed_eps(problem(symbol(2.0 * xi0), smooth_data(g)), o);
  const EnergyCheck c = check_energy_estimate(r.ledger);
  CHECK(c.pointwise_ok);
  CHECK(c.gronwall_ok);
  for (double d : c.ddt) CHECK(std::abs(d) <= 1e-9);
}

TEST_CASE("damped symbol: norms decrease and the bound holds") {
  const HyperbolicSymbol h = symbol((Expr::constant(1.0) + 0.5 * Expr::sin(x0)) * xi0,
                                    I * (Expr::constant(-0.5) - 0.5 * Expr::cos(x0)));
  SolveOptions o = fast();
  o.dt = 1e-3;
  const SolveResult r = solve_fixed_eps(problem(h, smooth_data(Grid{1, 64, 2 * M_PI})), o);
  const EnergyCheck c = check_energy_estimate(r.ledger);
  CHECK(c.pointwise_ok);
  CHECK(c.gronwall_ok);
  const auto& u = r.ledger.u_norm_sq;
  for (std::size_t i = 1; i < u.size(); ++i) CHECK(u[i] <= u[i - 1] * (1 + 1e-12));
  CHECK(u.back() < 0.8 * u.front());
  // The same run at four times the resolution.
  const SolveResult fine = solve_fixed_eps(problem(h, smooth_data(Grid{1, 256, 2 * M_PI})), o);
  CHECK(fine.ledger.u_norm_sq.back() == doctest::Approx(u.back()).epsilon(1e-6));
}

TEST_CASE("forced problem with zero data obeys the Gronwall bound") {
  const Grid g{1, 64, 2 * M_PI};
  CauchyProblem p = problem(symbol((Expr::constant(1.0) + 0.5 * Expr::cos(x0)) * xi0), GridFunction::zeros(g), 2.0);
  p.forcing.tau = {Expr::cos(Expr::t()), Expr::constant(1.0)};
  const GridFunction phi1 = GridFunction::sample(g, [](const std::array<double, 2>& x) { return Complex(std::sin(x[0])); });
  const GridFunction phi2 = GridFunction::sample(g, [](const std::array<double, 2>& x) { return Complex(0.0, 0.5 * std::cos(2 * x[0])); });
  p.forcing.phi = {phi1, phi2};
  const SolveResult r = solve_fixed_eps(p, fast());
  const EnergyCheck c = check_energy_estimate(r.ledger);
  CHECK(c.pointwise_ok);
  CHECK(c.gronwall_ok);
  // |f(t)|^2 = |phi1|^2 cos^2 t + |phi2|^2 since the profiles are orthogonal.
  const double a = phi1.norm_sq(), b = phi2.norm_sq();
  for (std::size_t i = 0; i < r.ledger.times.size(); ++i) {
    const double t = r.ledger.times[i];
    const double F = a * (t / 2 + std::sin(2 * t) / 4) + b * t;
    CHECK(r.ledger.u_norm_sq[i] <= std::exp(r.ledger.C_meas * t) * F * (1 + 1e-9) + 1e-14);
  }
  CHECK(r.ledger.u_norm_sq.back() > 0.0);
}

TEST_CASE("energy check rejects an incomplete ledger") {
  EnergyLedger l;
  l.times = {0.0, 0.1};
  l.u_norm_sq = {1.0};
  CHECK_THROWS_AS(check_energy_estimate(l), Error);
}

TEST_CASE("case variants") {
  const Grid g{1, 64, 2 * M_PI};
  SUBCASE("x-independent symbol qualifies for case (b) with r0 = 0") {
    HyperbolicSymbol h = symbol(Expr::japanese_bracket(1.0, 1));
    h.x_independent_outside = 0.0;
    const CauchyProblem p = problem(h, smooth_data(g));
    const SolveResult r = solve_fixed_eps(p);
    const CaseReport rep = check_case_variants(p, r);
    CHECK(rep.case_b_tagged);
    CHECK(rep.case_b_consistent);
    CHECK(rep.case_b_dominates);
    CHECK(rep.case_c_applicable);
    CHECK(rep.case_c_dominates);
  }
  SUBCASE("real c(x) xi qualifies for case (c)") {
    const CauchyProblem p = problem(symbol((Expr::constant(2.0) + Expr::sin(x0)) * xi0), smooth_data(g));
    const SolveResult r = solve_fixed_eps(p);
    const CaseReport rep = check_case_variants(p, r);
    CHECK_FALSE(rep.case_b_tagged);
    CHECK(rep.case_c_applicable);
    CHECK(rep.case_c_dominates);
    CHECK(rep.C_case_c <= rep.C_case_a);
  }
  SUBCASE("complex a0 is flagged") {
    const CauchyProblem p = problem(symbol(xi0, 3.0 * I * Expr::cos(x0)), smooth_data(g));
    const SolveResult r = solve_fixed_eps(p);
    const CaseReport rep = check_case_variants(p, r);
    CHECK_FALSE(rep.case_c_applicable);
    CHECK_FALSE(rep.note.empty());
  }
  SUBCASE("x dependence outside the tagged radius is a tag mismatch") {
    HyperbolicSymbol h = symbol((Expr::constant(2.0) + Expr::sin(x0)) * xi0);
    h.x_independent_outside = 0.5;
    const CauchyProblem p = problem(h, smooth_data(g));
    const SolveResult r = solve_fixed_eps(p, fast());
    CHECK_THROWS_AS(check_case_variants(p, r), Error);
  }
}

TEST_CASE("cascade: x-independent ledgers equal the differentiated-data runs") {
  const Grid g{1, 64, 2 * M_PI};
  const HyperbolicSymbol h = symbol(Expr::japanese_bracket(1.0, 1), Expr::constant(Complex(0.0, -0.3)));
  const CauchyProblem p = problem(h, smooth_data(g));
  const SolveResult r = solve_fixed_eps(p, fast());
  const std::vector<CascadeLedger> cas = derivative_cascade(p, r, 2, fast());
  REQUIRE(cas.size() == 3);
  for (const CascadeLedger& c : cas) {
    CHECK(c.bound_ok);
    const SolveResult d = solve_fixed_eps(problem(h, spectral_derivative(p.g, c.alpha)), fast());
    REQUIRE(d.trajectory.times.size() == c.times.size());
    for (std::size_t i = 0; i < c.times.size(); ++i) {
      CHECK(c.v_norm_sq[i] == doctest::Approx(d.trajectory.states[i].norm_sq()).epsilon(1e-10));
    }
  }
}

TEST_CASE("cascade bounds for variable speed") {
  const HyperbolicSymbol h = symbol((Expr::constant(1.0) + 0.5 * Expr::sin(x0)) * xi0);
  SUBCASE("alpha = 1 against four times the resolution") {
    std::vector<double> last;
    SolveOptions o = fast();
    o.dt = 1e-3;
    for (int M : {64, 256}) {
      const CauchyProblem p = problem(h, smooth_data(Grid{1, M, 2 * M_PI}));
      const SolveResult r = solve_fixed_eps(p, o);
      const std::vector<CascadeLedger> cas = derivative_cascade(p, r, 1, fast());
      REQUIRE(cas.size() == 2);
      CHECK(cas[1].bound_ok);
      last.push_back(cas[1].v_norm_sq.back());
    }
    CHECK(last[0] == doctest::Approx(last[1]).epsilon(1e-6));
  }
  SUBCASE("band-limited data up to order 3") {
    const Grid g{1, 64, 2 * M_PI};
    const GridFunction data = GridFunction::sample(g, [](const std::array<double, 2>& x) {
      return Complex(std::cos(x[0]) + 0.5 * std::sin(3 * x[0]), 0.2 * std::cos(5 * x[0]));
    });
    const CauchyProblem p = problem(h, data);
    const SolveResult r = solve_fixed_eps(p, fast());
    const std::vector<CascadeLedger> cas = derivative_cascade(p, r, 3, fast());
    REQUIRE(cas.size() == 4);
    for (const CascadeLedger& c : cas) {
      CHECK(c.bound_ok);
      for (double v : c.v_norm_sq) CHECK(std::isfinite(v));
    }
  }
}

TEST_CASE("step policy") {
  const Grid g{1, 64, 2 * M_PI};
  const CauchyProblem p = problem(symbol(xi0), smooth_data(g));
  const StepPlan sp = plan_steps(p, fast());
  CHECK(sp.dt * sp.symbol_sup <= 2.8 * 0.9 * (1 + 1e-12));
  SolveOptions big = fast();
  big.dt = 4.0 / sp.symbol_sup;
  CHECK_THROWS_AS(solve_fixed_eps(p, big), Error);
  // Overriding the margin lets the run start; RK4 then blows up and the growth guard aborts.
  big.override_stability = true;
  big.dt = 3.5 / sp.symbol_sup;
  try {
    solve_fixed_eps(problem(symbol(xi0), smooth_data(g), 20.0), big);
    FAIL("expected UnstableStep");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kUnstableStep);
  }
}

TEST_CASE("frozen calibration follows the corpus rule") {
  for (int dim : {1, 2}) {
    const std::vector<CalibrationSample> s = calibration_corpus(dim);
    double ra = 0.0, rb = 0.0;
    for (const auto& c : s) {
      ra = std::max(ra, c.C_meas / c.denom_a);
      rb = std::max(rb, c.C_meas / c.denom_b);
    }
    auto rule = [](double r) { return std::ceil(1.25 * r / 0.25) * 0.25; };
    const Calibration cal = frozen_calibration(dim);
    CAPTURE(dim);
    CAPTURE(ra);
    CAPTURE(rb);
    CHECK(cal.case_a == rule(ra));
    CHECK(cal.case_b == rule(std::max(ra, rb)));
  }
}

TEST_CASE("trajectory binary round-trip") {
  const Grid g{1, 32, 2 * M_PI};
  SolveOptions o = fast();
  o.stride = 3;
  const SolveResult r = solve_fixed_eps(problem(symbol(xi0, 0.1 * Expr::cos(x0)), smooth_data(g)), o);
  const std::string path = (std::filesystem::temp_directory_path() / "hyps_traj_test.bin").string();
  write_trajectory(path, r.trajectory);
  const Trajectory back = read_trajectory(path);
  std::filesystem::remove(path);
  CHECK(back.grid == r.trajectory.grid);
  CHECK(back.dt == r.trajectory.dt);
  CHECK(back.stride == 3);
  REQUIRE(back.states.size() == r.trajectory.states.size());
  for (std::size_t i = 0; i < back.states.size(); ++i) {
    CHECK(back.times[i] == r.trajectory.times[i]);
    CHECK(max_abs_diff(back.states[i], r.trajectory.states[i]) == 0.0);
  }
  CHECK_THROWS_AS(read_trajectory(path), Error);
}
