#include <cmath>
#include <random>

#include <doctest.h>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include "hyps/regularization.hpp"

using namespace hyps;

namespace {

const double kL = 2 * M_PI;

Grid grid1(int M, double L = kL) { return Grid{1, M, L}; }

RoughSymbolSpec piecewise_speed() {
  RoughSymbolSpec s;
  s.speeds = {CoefficientSpec::rough(RoughCoefficient::piecewise_constant({0.0, M_PI}, {1.0, 2.0}, kL))};
  return s;
}

// d/dx of the mollified speed at x (coefficient of xi).
double speed_derivative(const HyperbolicSymbol& h, double x, int order) {
  Expr e = h.a1.expr.diff_xi(0);
  for (int i = 0; i < order; ++i) e = e.diff_x(0);
  SymbolPoint p;
  p.x = {x, 0.0};
  return e.eval(p).real();
}

struct MomentParams {
  Mollifier m;
  int alpha;
  double delta;
};

double moment_integrand(double y, void* data) {
  const auto* p = static_cast<const MomentParams*>(data);
  return std::pow(y, p->alpha) * p->m.kernel({y, 0.0}) * std::exp(-p->delta * y * y);
}

// Gaussian-damped moment by adaptive Gauss-Kronrod.  rho decays only like
// exp(-c sqrt|y|), so the undamped high moments are not computable in double
// precision; the damping biases the result by about exp(-1/(8 delta)).
double damped_moment(int alpha, double delta = 1.0 / 200.0) {
  gsl_set_error_handler_off();
  MomentParams p{Mollifier{1, 1.0}, alpha, delta};
  gsl_function f{&moment_integrand, &p};
  gsl_integration_workspace* w = gsl_integration_workspace_alloc(4000);
  const double R = 12.0 / std::sqrt(delta);
  double total = 0.0;
  // Panels of width 10 keep the oscillation count per QAG call small.
  for (double a = -R; a < R; a += 10.0) {
    double v = 0.0, err = 0.0;
    gsl_integration_qag(&f, a, std::min(a + 10.0, R), 1e-15, 1e-12, 4000, GSL_INTEG_GAUSS61, w, &v, &err);
    total += v;
  }
  gsl_integration_workspace_free(w);
  return total;
}

}  // namespace

TEST_CASE("omega_of_eps") {
  CHECK(omega_of_eps(std::exp(-8.0), 3) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(omega_of_eps(std::exp(-1.0), 1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(omega_of_eps(1e-4, 2) == doctest::Approx(3.0348542587702925).epsilon(1e-12));
  for (double e : {0.0, 1.0, -0.5, 2.0}) CHECK_THROWS_AS(omega_of_eps(e, 1), Error);
  double prev = 0.0;
  for (double e = 0.5; e > 1e-12; e *= 0.1) {
    CHECK(omega_of_eps(e, 2) > prev);
    prev = omega_of_eps(e, 2);
  }
}

TEST_CASE("mollifier profile plateau and cutoff") {
  CHECK(mollifier_profile(0.0) == 1.0);
  CHECK(mollifier_profile(1.0) == 1.0);
  CHECK(mollifier_profile(2.0) == 0.0);
  CHECK(mollifier_profile(3.5) == 0.0);
  CHECK(mollifier_profile(1.5) == doctest::Approx(0.5));
  CHECK(mollifier_profile(2.0, 2.0) == doctest::Approx(0.5));
}

TEST_CASE("mollifier kernel is real, even and of unit mass") {
  const Mollifier m{1, 1.0};
  for (double y : {0.1, 0.7, 2.3, 9.0}) CHECK(m.kernel({y, 0}) == m.kernel({-y, 0}));
  CHECK(damped_moment(0) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("mollifier moments of order 1 to 6 vanish") {
  for (int a = 1; a <= 6; ++a) {
    const double m = damped_moment(a);
    INFO("alpha = " << a << ", moment = " << m);
    CHECK(std::abs(m) <= 1e-8);
  }
}

TEST_CASE("scaled mollifier is omega rho(omega y) with unit mass") {
  const Mollifier base{1, 1.0};
  for (double omega : {0.5, 2.0, 3.7}) {
    const ScaledMollifier s{base, omega};
    for (double y : {0.0, 0.3, -1.7, 5.0}) {
      CHECK(s.kernel({y, 0}) == doctest::Approx(omega * base.kernel({omega * y, 0})).epsilon(1e-14));
    }
    CHECK(s.fourier_profile(omega) == 1.0);
    CHECK(s.fourier_profile(2.0 * omega) == 0.0);
  }
  // The mass is omega-independent by substitution, so the base mass decides.
  CHECK(damped_moment(0) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("embed_data examples") {
  const Grid g = grid1(128);
  const double eps = 0.1;
  // Band-limited with |xi| <= 1/eps: unchanged.
  const GridFunction w = GridFunction::sample(g, [](const std::array<double, 2>& x) {
    return Complex(std::cos(3 * x[0]), 0.0) + 0.5 * std::polar(1.0, -10.0 * x[0]);
  });
  const GridFunction e = embed_data(w, eps, g);
  CHECK(max_abs_diff(e, w) <= 1e-13);
  CHECK(max_abs_diff(embed_data(e, eps, g), e) <= 1e-13);

  // Discrete delta: the output is rho_eps sampled on the grid (periodized).
  GridFunction d = GridFunction::zeros(g);
  const int j0 = 40;
  d.values[j0] = 1.0 / g.dx();
  const double eps_d = 0.25;
  const GridFunction r = embed_data(d, eps_d, g);
  const Mollifier m{1, 1.0};
  double worst = 0.0;
  for (int j = 0; j < g.M; ++j) {
    double ref = 0.0;
    for (int img = -40; img <= 40; ++img) {
      const double y = g.node(j) - g.node(j0) + img * g.L;
      ref += m.kernel({y / eps_d, 0.0}) / eps_d;
    }
    worst = std::max(worst, std::abs(r.values[j] - ref));
  }
  CHECK(worst <= 1e-4);

  CHECK_THROWS_AS(embed_data(w, eps, grid1(64)), Error);
}

TEST_CASE("embed_data contracts in L2 and converges as eps decreases") {
  const Grid g = grid1(128);
  std::mt19937_64 rng(99);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    GridFunction w = GridFunction::zeros(g);
    for (auto& v : w.values) v = Complex(n(rng), n(rng));
    double prev = INFINITY;
    for (double eps = 1.0; eps > 1e-3; eps *= 0.5) {
      const GridFunction e = embed_data(w, eps, g);
      CHECK(e.norm() <= w.norm() * (1.0 + 1e-14));
      GridFunction diff = e;
      for (std::size_t i = 0; i < diff.values.size(); ++i) diff.values[i] -= w.values[i];
      CHECK(diff.norm() <= prev + 1e-12);
      prev = diff.norm();
    }
    // Below 1/Nyquist nothing is damped.
    CHECK(prev <= 1e-12 * w.norm());
  }
}

TEST_CASE("regularize_symbol: constant coefficient is eps-independent") {
  RoughSymbolSpec s;
  s.speeds = {CoefficientSpec::rough(RoughCoefficient::piecewise_constant({0.0}, {1.75}, kL))};
  for (double eps : {0.5, 1e-2, 1e-6}) {
    const HyperbolicSymbol h = regularize_symbol(s, 1, eps);
    for (double x : {0.0, 1.0, 3.0, 5.5}) {
      CHECK(speed_derivative(h, x, 0) == doctest::Approx(1.75).epsilon(1e-14));
      CHECK(std::abs(speed_derivative(h, x, 1)) <= 1e-14);
    }
  }
}

TEST_CASE("regularize_symbol: smooth coefficient matches a direct convolution") {
  RoughSymbolSpec s;
  s.speeds = {CoefficientSpec::smooth(Expr::constant(2.0) + Expr::sin(Expr::x(0)))};
  // rho on a fixed z lattice; int rho^eps(y) c(x - y) dy = int rho(z) c(x - z / omega) dz.
  const Mollifier m{1, 1.0};
  const double hz = 0.05;
  std::vector<double> rho;
  for (double z = -150.0; z <= 150.0 + 1e-9; z += hz) rho.push_back(m.kernel({z, 0.0}));
  for (double eps : {0.3, 1e-2, 1e-4}) {
    const double omega = omega_of_eps(eps, 1);
    const HyperbolicSymbol h = regularize_symbol(s, 1, eps);
    double worst = 0.0, dev = 0.0;
    for (double x : {0.0, 0.9, 2.2, 4.0}) {
      double conv = 0.0;
      for (std::size_t i = 0; i < rho.size(); ++i) {
        const double z = -150.0 + hz * static_cast<double>(i);
        conv += rho[i] * (2.0 + std::sin(x - z / omega)) * hz;
      }
      const double got = speed_derivative(h, x, 0);
      worst = std::max(worst, std::abs(got - conv));
      dev = std::max(dev, std::abs(got - (2.0 + std::sin(x))));
    }
    CHECK(worst <= 1e-3);
    // The plateau keeps |kappa| <= omega untouched, so sin survives exactly once omega >= 1.
    CHECK(dev <= (omega >= 1.0 ? 1e-12 : 2.0 / (omega * omega)));
  }
}

TEST_CASE("regularize_symbol: jump gives derivative growth proportional to omega") {
  const RoughSymbolSpec s = piecewise_speed();
  const double rho0 = Mollifier{1, 1.0}.kernel({0.0, 0.0});
  for (double eps : {1e-3, 1e-6, 1e-12}) {
    const double omega = omega_of_eps(eps, 1);
    const HyperbolicSymbol h = regularize_symbol(s, 1, eps);
    // Oracle: d/dx (rho^eps * c)(x) = sum over jumps of jump * rho^eps(x - b), periodized.
    const ScaledMollifier r{Mollifier{1, 1.0}, omega};
    auto oracle = [&](double x) {
      double acc = 0.0;
      for (int img = -20; img <= 20; ++img) {
        acc += 1.0 * r.kernel({x - M_PI + img * kL, 0}) - 1.0 * r.kernel({x + img * kL, 0});
      }
      return acc;
    };
    for (double x : {M_PI, M_PI + 0.3, 1.0}) {
      CHECK(speed_derivative(h, x, 1) == doctest::Approx(oracle(x)).epsilon(1e-6).scale(1e-9));
    }
    const double peak = speed_derivative(h, M_PI, 1);
    CHECK(peak / (omega * rho0) == doctest::Approx(1.0).epsilon(0.05));
  }
}

TEST_CASE("regularize_symbol output is real for real coefficients") {
  RoughSymbolSpec s = piecewise_speed();
  s.lower = CoefficientSpec::rough(RoughCoefficient::piecewise_linear({0.0, 2.0, 4.0}, {0.0, 1.0, -0.5}, kL));
  const HyperbolicSymbol h = regularize_symbol(s, 1, 1e-3);
  const SamplingBox box = SamplingBox::for_domain(1, kL, 64, 1024.0, 1.0);
  for (const auto& x : box.x_points()) {
    for (const auto& xi : box.xi_points()) {
      SymbolPoint p;
      p.x = x;
      p.xi = xi;
      const Complex a1 = h.a1.expr.eval(p);
      CHECK(std::abs(a1.imag()) <= 1e-14 * std::max(1.0, std::abs(a1)));
      CHECK(std::abs(h.a0.expr.eval(p).imag()) <= 1e-14);
    }
  }
}

TEST_CASE("rough coefficients: exact Fourier data and table kind") {
  const auto pc = RoughCoefficient::piecewise_constant({0.0, M_PI}, {1.0, 2.0}, kL);
  CHECK(pc(1.0) == 1.0);
  CHECK(pc(4.0) == 2.0);
  CHECK(pc.max_jump() == 1.0);
  CHECK(std::abs(pc.fourier_coefficient(0) - 1.5) < 1e-15);
  // c_1 = (1/2pi) int (1 on [0,pi), 2 on [pi,2pi)) e^{-iy} dy = i/pi.
  CHECK(std::abs(pc.fourier_coefficient(1) - Complex(0.0, 1.0 / M_PI)) < 1e-14);
  CHECK(std::abs(pc.fourier_coefficient(2)) < 1e-14);

  const auto t = RoughCoefficient::table({0.0, 1.0, 0.0, -1.0}, kL);
  CHECK(t(0.5 * M_PI + 0.1) == 1.0);
  CHECK(t.kind() == RoughCoefficient::Kind::kTable);
  // Quadrature oracle for the table's coefficients.
  for (int m = 0; m < 4; ++m) {
    Complex acc{0.0, 0.0};
    const int n = 40000;
    for (int j = 0; j < n; ++j) {
      const double y = (j + 0.5) * kL / n;
      acc += t(y) * std::polar(1.0, -m * y);
    }
    CHECK(std::abs(t.fourier_coefficient(m) - acc / static_cast<double>(n)) < 1e-4);
  }
}

TEST_CASE("verify_log_type_of_regularization") {
  const auto eps = GenSymbolFamily::geometric_grid(0.1, 0.1, 6);
  const SamplingBox box = SamplingBox::for_domain(1, kL, 256, 64.0, 1.0);
  const RegularizationLogTypeReport r1 = verify_log_type_of_regularization(piecewise_speed(), 1, eps, box);
  CHECK(r1.all_log_type);
  REQUIRE(r1.verdicts.size() >= 2);
  CHECK(r1.verdicts[0].is_log_type);
  // l = 0: no growth in eps; Young's inequality bounds the sup by |rho|_1 sup|c|.
  CHECK(std::abs(r1.verdicts[0].fitted_coeff) <= 0.01 * 2.0);
  const Mollifier m{1, 1.0};
  double rho_l1 = 0.0;
  for (double z = -400.0; z <= 400.0; z += 0.05) rho_l1 += std::abs(m.kernel({z, 0.0})) * 0.05;
  for (double v : r1.series[0].values) CHECK(v <= 2.0 * rho_l1);

  // k = 2: the second x-derivative grows like omega^2 = log(1/eps).
  const RegularizationLogTypeReport r2 = verify_log_type_of_regularization(piecewise_speed(), 2, eps, box);
  CHECK(r2.all_log_type);
  const auto& s2 = r2.series.back();
  const double slope = (s2.values.back() - s2.values.front()) /
                       (std::log(1.0 / s2.eps.back()) - std::log(1.0 / s2.eps.front()));
  CHECK(slope > 0.0);
  for (std::size_t i = 0; i < s2.eps.size(); ++i) {
    CHECK(s2.values[i] / std::log(1.0 / s2.eps[i]) == doctest::Approx(s2.values.back() / std::log(1.0 / s2.eps.back())).epsilon(0.35));
  }
}
