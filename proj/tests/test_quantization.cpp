#include <cmath>
#include <random>

#include <doctest.h>

#include "hyps/quantization.hpp"

using namespace hyps;

namespace {

const Expr x0 = Expr::x(0);
const Expr xi0 = Expr::xi(0);

GridFunction random_function(const Grid& g, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  GridFunction u = GridFunction::zeros(g);
  for (auto& v : u.values) v = Complex(n(rng), n(rng));
  return u;
}

// Independent Kohn-Nirenberg matrix: A_jl = (1/M) sum_k s(x_j, xi_k) e^{i xi_k (x_j - x_l)}.
Eigen::MatrixXcd kn_matrix(const std::function<Complex(double, double)>& s, const Grid& g) {
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(g.M, g.M);
  for (int j = 0; j < g.M; ++j) {
    for (int k = 0; k < g.M; ++k) {
      const double xi = g.frequency(k);
      const Complex sv = s(g.node(j), xi);
      for (int l = 0; l < g.M; ++l) {
        A(j, l) += sv * std::polar(1.0, xi * (g.node(j) - g.node(l))) / static_cast<double>(g.M);
      }
    }
  }
  return A;
}

Eigen::VectorXcd vec(const GridFunction& u) {
  Eigen::VectorXcd v(u.values.size());
  for (std::size_t i = 0; i < u.values.size(); ++i) v[i] = u.values[i];
  return v;
}

double spectral_norm(const Eigen::MatrixXcd& A) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
  return svd.singularValues()(0);
}

// Unitary DFT matrix for the discrete L2 inner product.
Eigen::MatrixXcd dft(int M) {
  Eigen::MatrixXcd F(M, M);
  for (int k = 0; k < M; ++k) {
    for (int j = 0; j < M; ++j) F(k, j) = std::polar(1.0 / std::sqrt(M), -2.0 * M_PI * k * j / M);
  }
  return F;
}

const Expr bump_speed = (Expr::constant(1.0) + 0.5 * Expr::smooth_bump(x0, M_PI, 3.0)) * xi0;

}  // namespace

TEST_CASE("grid frequencies and modes") {
  const Grid g{1, 8, 4.0};
  CHECK(g.mode(3) == 3);
  CHECK(g.mode(4) == -4);
  CHECK(g.mode(7) == -1);
  CHECK(g.frequency(1) == doctest::Approx(2 * M_PI / 4.0));
  CHECK(g.is_nyquist(4));
  CHECK(g.band_limit() == 2);
  CHECK(g.in_band(2));
  CHECK_FALSE(g.in_band(3));
  CHECK_THROWS_AS((Grid{1, 6, 1.0}.validate()), Error);
}

TEST_CASE("fourier_coefficients and from_fourier are inverse") {
  std::mt19937_64 rng(3);
  for (int dim = 1; dim <= 2; ++dim) {
    const Grid g{dim, 16, 3.0};
    const GridFunction u = random_function(g, rng);
    CHECK(max_abs_diff(from_fourier(g, fourier_coefficients(u)), u) <= 1e-12);
  }
}

TEST_CASE("apply_op examples") {
  const Grid g{1, 64, 2 * M_PI};
  std::mt19937_64 rng(11);
  const GridFunction u = random_function(g, rng);
  CHECK(max_abs_diff(apply_op({Expr::constant(1.0), 0.0, 1}, 0.0, u), u) <= 1e-12);

  const double xi1 = 2 * M_PI / g.L;
  const GridFunction mode = GridFunction::sample(g, [&](const std::array<double, 2>& x) {
    return std::polar(1.0, xi1 * x[0]);
  });
  GridFunction scaled = mode;
  for (auto& v : scaled.values) v *= xi1;
  CHECK(max_abs_diff(apply_op({xi0, 1.0, 1}, 0.0, mode), scaled) <= 1e-12);

  GridFunction mult = u;
  for (int j = 0; j < g.M; ++j) mult.values[j] *= std::sin(g.node(j));
  CHECK(max_abs_diff(apply_op({Expr::sin(x0), 0.0, 1}, 0.0, u), mult) <= 1e-12);

  const Grid g32{1, 32, 2 * M_PI};
  const GridFunction w = random_function(g32, rng);
  const Eigen::MatrixXcd A = kn_matrix([](double x, double xi) { return (2.0 + std::sin(x)) * xi; }, g32);
  const Eigen::VectorXcd ref = A * vec(w);
  const GridFunction got = apply_op({(Expr::constant(2.0) + Expr::sin(x0)) * xi0, 1.0, 1}, 0.0, w);
  double err = 0.0;
  for (int j = 0; j < g32.M; ++j) err = std::max(err, std::abs(got.values[j] - ref[j]));
  CHECK(err <= 1e-10);
}

TEST_CASE("apply_op rejects mismatched dimensions") {
  const Grid g{1, 16, 1.0};
  CHECK_THROWS_AS(apply_op({Expr::xi(1), 1.0, 2}, 0.0, GridFunction::zeros(g)), Error);
}

TEST_CASE("op_matrix examples") {
  const Grid g{1, 16, 2 * M_PI};
  const Eigen::MatrixXcd I = op_matrix({Expr::constant(1.0), 0.0, 1}, 0.0, g);
  CHECK((I - Eigen::MatrixXcd::Identity(16, 16)).cwiseAbs().maxCoeff() <= 1e-12);
  const Eigen::MatrixXcd D = op_matrix({Expr::cos(x0) + Expr::constant(0.5), 0.0, 1}, 0.0, g);
  for (int j = 0; j < 16; ++j) {
    for (int l = 0; l < 16; ++l) {
      const Complex expect = j == l ? Complex(std::cos(g.node(j)) + 0.5) : Complex(0.0);
      CHECK(std::abs(D(j, l) - expect) <= 1e-12);
    }
  }
  std::mt19937_64 rng(5);
  const SymbolExpr s{Expr::sin(x0) * Expr::japanese_bracket(1.0, 1) + Expr::cos(0.1 * x0 * xi0), 1.0, 1};
  const Eigen::MatrixXcd A = op_matrix(s, 0.0, g);
  for (int trial = 0; trial < 5; ++trial) {
    const GridFunction u = random_function(g, rng);
    const Eigen::VectorXcd v = A * vec(u);
    const GridFunction w = apply_op(s, 0.0, u);
    for (int j = 0; j < 16; ++j) CHECK(std::abs(v[j] - w.values[j]) <= 1e-12);
  }
  CHECK_THROWS_AS(op_matrix({xi0, 1.0, 1}, 0.0, Grid{1, 8192, 1.0}), Error);
}

TEST_CASE("band-projected Quantized equals P op P") {
  const Grid g{1, 32, 2 * M_PI};
  const SymbolExpr s{(Expr::constant(2.0) + Expr::sin(x0)) * xi0, 1.0, 1};
  QuantizeOptions opt;
  opt.band_projected = true;
  const Quantized q(s, g, opt);
  std::mt19937_64 rng(8);
  const GridFunction u = random_function(g, rng);
  const GridFunction ref = band_project(apply_op(s, 0.0, band_project(u)));
  CHECK(max_abs_diff(q.apply(0.0, u), ref) <= 1e-11);
}

TEST_CASE("Fourier multipliers commute and compose") {
  const Grid g{1, 64, 2 * M_PI};
  std::mt19937_64 rng(17);
  const Expr gx = Expr::japanese_bracket(1.0, 1);
  const Expr hx = Expr::sin(xi0) + Expr::constant(Complex(0.0, 0.3));
  for (int trial = 0; trial < 5; ++trial) {
    const GridFunction u = random_function(g, rng);
    const GridFunction gh = apply_op({gx, 1.0, 1}, 0.0, apply_op({hx, 0.0, 1}, 0.0, u));
    const GridFunction hg = apply_op({hx, 0.0, 1}, 0.0, apply_op({gx, 1.0, 1}, 0.0, u));
    const GridFunction prod = apply_op({gx * hx, 1.0, 1}, 0.0, u);
    CHECK(max_abs_diff(gh, prod) <= 1e-10);
    CHECK(max_abs_diff(hg, prod) <= 1e-10);
  }
}

TEST_CASE("apply_adjoint_op is the discrete conjugate transpose") {
  const Grid g{1, 32, 2 * M_PI};
  const SymbolExpr s{bump_speed + Expr::constant(Complex(0.0, 0.2)) * Expr::cos(x0), 1.0, 1};
  const Eigen::MatrixXcd A = op_matrix(s, 0.0, g).adjoint();
  std::mt19937_64 rng(21);
  const GridFunction u = random_function(g, rng);
  const Eigen::VectorXcd ref = A * vec(u);
  const GridFunction got = apply_adjoint_op(s, 0.0, u);
  for (int j = 0; j < g.M; ++j) CHECK(std::abs(got.values[j] - ref[j]) <= 1e-10);
}

TEST_CASE("adjoint_defect_norm examples") {
  const Grid g{1, 64, 2 * M_PI};
  NormOptions full;
  full.band_projected = false;
  full.method = NormMethod::kDense;
  CHECK(adjoint_defect_norm({Expr::japanese_bracket(1.0, 1) + 0.5 * xi0, 1.0, 1}, 0.0, g, full).value <= 1e-12);
  CHECK(adjoint_defect_norm({Expr::constant(2.0) + Expr::sin(x0), 0.0, 1}, 0.0, g, full).value <= 1e-12);
  // The generator i op(h) with h real and x-independent is skew: op + op^dagger vanishes.
  const SymbolExpr is{Expr::constant(Complex(0.0, 1.0)) * Expr::japanese_bracket(1.0, 1), 1.0, 1};
  const Quantized q(is, g);
  std::mt19937_64 rng(2);
  const GridFunction u = random_function(g, rng);
  GridFunction sum = q.apply(0.0, u);
  const GridFunction adj = q.apply_adjoint(0.0, u);
  for (std::size_t i = 0; i < sum.values.size(); ++i) sum.values[i] += adj.values[i];
  CHECK(sum.max_abs() <= 1e-12);

  NormOptions power;
  power.seed = 12345;
  std::vector<double> v;
  for (int M : {64, 128, 256}) {
    v.push_back(adjoint_defect_norm({(Expr::constant(2.0) + Expr::sin(x0)) * xi0, 1.0, 1}, 0.0,
                                    Grid{1, M, 2 * M_PI}, power).value);
  }
  const double hi = *std::max_element(v.begin(), v.end());
  const double lo = *std::min_element(v.begin(), v.end());
  CHECK(hi / lo <= 1.1);
  // The same constant from the exact dense path.
  NormOptions dense;
  dense.method = NormMethod::kDense;
  const double d64 = adjoint_defect_norm({(Expr::constant(2.0) + Expr::sin(x0)) * xi0, 1.0, 1}, 0.0,
                                         Grid{1, 64, 2 * M_PI}, dense).value;
  // Fifty power steps give a lower bound close to the dense value.
  CHECK(v[0] <= d64 * (1 + 1e-9));
  CHECK(v[0] >= 0.99 * d64);
}

TEST_CASE("power iteration is deterministic for a fixed seed") {
  const Grid g{1, 128, 2 * M_PI};
  const SymbolExpr s{bump_speed, 1.0, 1};
  NormOptions o;
  o.seed = 777;
  const NormResult a = adjoint_defect_norm(s, 0.0, g, o);
  const NormResult b = adjoint_defect_norm(s, 0.0, g, o);
  CHECK(a.value == b.value);
  CHECK(a.iterations == b.iterations);
}

TEST_CASE("operator_norm examples") {
  const Grid g{1, 64, 2 * M_PI};
  NormOptions o;
  o.band_projected = false;
  CHECK(operator_norm({Expr::constant(Complex(3.0, -4.0)), 0.0, 1}, 0.0, g, o).norm.value ==
        doctest::Approx(5.0).epsilon(1e-6));
  double smax = 0.0;
  for (int j = 0; j < g.M; ++j) smax = std::max(smax, std::abs(std::sin(g.node(j))));
  NormOptions d = o;
  d.method = NormMethod::kDense;
  CHECK(operator_norm({Expr::sin(x0), 0.0, 1}, 0.0, g, d).norm.value == doctest::Approx(smax).epsilon(1e-12));
  // Clustered top singular values slow the power method; it still approaches from below.
  const double p = operator_norm({Expr::sin(x0), 0.0, 1}, 0.0, g, o).norm.value;
  CHECK(p <= smax * (1 + 1e-9));
  CHECK(p >= 0.99 * smax);
}

TEST_CASE("operator_norm against a calibrated Calderon-Vaillancourt constant") {
  const Grid g{1, 64, 2 * M_PI};
  NormOptions o;
  o.band_projected = false;
  o.method = NormMethod::kDense;
  const std::vector<SymbolExpr> corpus = {
      {Expr::sin(x0), 0.0, 1},
      {Expr::cos(2.0 * x0) * Expr::japanese_bracket(-1.0, 1) * xi0, 0.0, 1},
      {Expr::smooth_bump(x0, 3.0, 1.0) + Expr::constant(0.5), 0.0, 1},
      {Expr::sin(x0) * Expr::sin(0.2 * xi0), 0.0, 1},
  };
  double Cp = 0.0;
  for (const auto& s : corpus) {
    const OperatorNormReport r = operator_norm(s, 0.0, g, o);
    Cp = std::max(Cp, r.norm.value / r.seminorm_bound);
  }
  const SymbolExpr target{Expr::sin(x0) * Expr::smooth_step(xi0, 0.0, 4.0), 0.0, 1};
  const OperatorNormReport r = operator_norm(target, 0.0, g, o);
  CHECK(r.norm.value <= 1.25 * Cp * r.seminorm_bound);
}

TEST_CASE("operator norm is invariant under DFT conjugation") {
  const Grid g{1, 32, 2 * M_PI};
  const Eigen::MatrixXcd F = dft(g.M);
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const SymbolExpr s{Expr::constant(u(rng)) * Expr::sin(x0) * xi0 + Expr::constant(u(rng)) * Expr::cos(2.0 * x0) +
                           Expr::constant(Complex(0.0, u(rng))) * Expr::japanese_bracket(0.5, 1),
                       1.0, 1};
    const Eigen::MatrixXcd A = op_matrix(s, 0.0, g);
    NormOptions o;
    o.band_projected = false;
    o.iters = 400;
    o.tol = 1e-12;
    const double n = operator_norm_only(Quantized(s, g), 0.0, o).value;
    CHECK(n == doctest::Approx(spectral_norm(F * A * F.adjoint())).epsilon(1e-6));
    CHECK(spectral_norm(F * A * F.adjoint()) == doctest::Approx(spectral_norm(A)).epsilon(1e-12));
  }
}

TEST_CASE("adjoint remainder: x-independent symbols give zero") {
  const OscIntConfig cfg;
  const SymbolExpr s{Expr::japanese_bracket(1.0, 1) + 0.5 * xi0, 1.0, 1};
  for (double xi : {0.0, 3.0, -40.0}) {
    CHECK(std::abs(adjoint_symbol_remainder(s, 0.0, {1.0, 0}, {xi, 0}, cfg).value) == 0.0);
  }
  const SamplingBox box = SamplingBox::for_domain(1, 2 * M_PI, 32, 1024.0, 1.0);
  const RemainderEstimate e = check_remainder_estimate(s, {0, 0}, {0, 0}, cfg, box);
  CHECK(e.lhs == 0.0);
  CHECK(e.ratio == 0.0);
}

TEST_CASE("adjoint remainder of c(x) xi is -i c'(x) along the xi ladder") {
  const OscIntConfig cfg;
  const SymbolExpr s{bump_speed, 1.0, 1};
  const Expr dc = (0.5 * Expr::smooth_bump(x0, M_PI, 3.0)).diff_x(0);
  for (double x : {M_PI - 1.0, M_PI, M_PI + 2.0}) {
    SymbolPoint p;
    p.x = {x, 0.0};
    const Complex exact = Complex(0.0, -1.0) * dc.eval(p);
    for (double xi : {0.0, 1.0, 4.0, 16.0, 64.0}) {
      const RemainderValue r = adjoint_symbol_remainder(s, 0.0, {x, 0}, {xi, 0}, cfg);
      CHECK(std::abs(r.value - exact) <= 5e-3);
      CHECK(r.tail_bound <= cfg.tail_tol);
    }
  }
}

TEST_CASE("op of the reconstructed adjoint symbol matches the matrix adjoint") {
  const Grid g{1, 32, 2 * M_PI};
  const SymbolExpr s{bump_speed, 1.0, 1};
  const OscIntConfig cfg;
  std::vector<double> xs, xis;
  for (int j = 0; j < g.M; ++j) xs.push_back(g.node(j));
  for (int k = 0; k < g.M; ++k) xis.push_back(g.frequency(k));
  const RemainderTable t = remainder_theta_table(s, 0.0, xs, xis, cfg);
  auto astar = [&](int j, int k) {
    Complex r{0.0, 0.0};
    for (std::size_t q = 0; q < t.theta.size(); ++q) r += t.theta_weights[q] * t.r[q][k][j];
    SymbolPoint p;
    p.x = {xs[j], 0.0};
    p.xi = {xis[k], 0.0};
    return std::conj(s.expr.eval(p)) + Complex(0.0, -1.0) * r;
  };
  // Band-limited comparison: the torus adjoint and op(a*) differ mostly at the wrap-around pair.
  Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(g.M, g.M);
  for (int j = 0; j < g.M; ++j) {
    for (int k = 0; k < g.M; ++k) {
      if (!g.in_band(k)) continue;
      const Complex a = astar(j, k);
      for (int l = 0; l < g.M; ++l) B(j, l) += a * std::polar(1.0, xis[k] * (xs[j] - xs[l])) / 32.0;
    }
  }
  Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(g.M, g.M);
  {
    const Eigen::MatrixXcd F = dft(g.M);
    Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(g.M, g.M);
    for (int k = 0; k < g.M; ++k) D(k, k) = g.in_band(k) ? 1.0 : 0.0;
    P = F.adjoint() * D * F;
  }
  const Eigen::MatrixXcd A = op_matrix(s, 0.0, g).adjoint() * P;
  const double rel = spectral_norm(P * (B - A)) / spectral_norm(P * A);
  CHECK(rel <= 5e-2);
}

TEST_CASE("check_remainder_estimate is stable under theta and box refinement") {
  const SymbolExpr s{bump_speed, 1.0, 1};
  const SamplingBox box = SamplingBox::for_domain(1, 2 * M_PI, 32, 1024.0, 1.0);
  OscIntConfig base;
  const RemainderEstimate e0 = check_remainder_estimate(s, {0, 0}, {0, 0}, base, box);
  CHECK(std::isfinite(e0.ratio));
  CHECK(e0.ratio > 0.0);
  OscIntConfig th = base;
  th.theta_nodes *= 2;
  OscIntConfig bx = base;
  bx.y_half *= 1.5;
  bx.eta_half *= 1.5;
  CHECK(check_remainder_estimate(s, {0, 0}, {0, 0}, th, box).ratio == doctest::Approx(e0.ratio).epsilon(0.2));
  CHECK(check_remainder_estimate(s, {0, 0}, {0, 0}, bx, box).ratio == doctest::Approx(e0.ratio).epsilon(0.2));
}

TEST_CASE("OscIntConfig validation") {
  OscIntConfig c;
  CHECK_NOTHROW(c.validate(1, 0));
  c.l_order = 1;
  CHECK_THROWS_AS(c.validate(1, 1), Error);
  c.lambda = 0;
  CHECK_THROWS_AS(c.validate(1, 0), Error);
  OscIntConfig d;
  d.theta_nodes = 0;
  CHECK_THROWS_AS(d.validate(1, 0), Error);
}
