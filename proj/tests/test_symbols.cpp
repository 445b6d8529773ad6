#include <cmath>
#include <random>

#include <doctest.h>

#include "hyps/symbols.hpp"

using namespace hyps;

namespace {

const Expr x0 = Expr::x(0);
const Expr xi0 = Expr::xi(0);

SymbolPoint pt(double t, double x, double xi) {
  SymbolPoint p;
  p.t = t;
  p.x = {x, 0.0};
  p.xi = {xi, 0.0};
  return p;
}

// Random smooth expressions in (t, x0, xi0) for the finite-difference check.
Expr random_expr(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth > 0 ? 8 : 3);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  switch (pick(rng)) {
    case 0: return Expr::constant(u(rng));
    case 1: return x0;
    case 2: return xi0;
    case 3: return Expr::t();
    case 4: return Expr::sum({random_expr(rng, depth - 1), random_expr(rng, depth - 1)});
    case 5: return Expr::product({random_expr(rng, depth - 1), random_expr(rng, depth - 1)});
    case 6: return Expr::sin(random_expr(rng, depth - 1));
    case 7: return Expr::cos(random_expr(rng, depth - 1));
    default: return Expr::japanese_bracket(u(rng), 1) * random_expr(rng, depth - 1);
  }
}

}  // namespace

TEST_CASE("eval_symbol closed forms") {
  const SymbolExpr lin{xi0, 1.0, 1};
  CHECK(eval_symbol(lin, 0.3, {1.0, 0.0}, {-7.0, 0.0}, 0, {1, 0}, {0, 0}) == Complex(1.0, 0.0));
  const SymbolExpr c{Expr::constant(5.0), 0.0, 1};
  for (double x : {-3.0, 0.0, 2.5}) CHECK(eval_symbol(c, 0.0, {x, 0}, {x * x, 0}, 0, {0, 0}, {0, 0}) == Complex(5.0));
  const SymbolExpr p{Expr::sin(x0) * xi0, 1.0, 1};
  CHECK(std::abs(eval_symbol(p, 0.0, {0.0, 0}, {3.0, 0}, 0, {0, 0}, {1, 0}) - 3.0) < 1e-15);
}

TEST_CASE("eval_symbol rejects orders above the limit") {
  const SymbolExpr s{Expr::sin(x0), 0.0, 1};
  CHECK_THROWS_AS(eval_symbol(s, 0.0, {0, 0}, {0, 0}, 0, {0, 0}, {7, 0}), Error);
  CHECK_NOTHROW(eval_symbol(s, 0.0, {0, 0}, {0, 0}, 0, {0, 0}, {7, 0}, 8));
}

TEST_CASE("tree derivatives match central differences") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const Expr e = random_expr(rng, 3);
    const SymbolPoint p = pt(u(rng), 2.0 * u(rng), 3.0 * u(rng));
    const double h = 1e-5;
    struct Dir {
      Expr d;
      SymbolPoint plus, minus;
    };
    SymbolPoint tp = p, tm = p, xp = p, xm = p, sp = p, sm = p;
    tp.t += h, tm.t -= h, xp.x[0] += h, xm.x[0] -= h, sp.xi[0] += h, sm.xi[0] -= h;
    for (const Dir& d : {Dir{e.diff_t(), tp, tm}, Dir{e.diff_x(0), xp, xm}, Dir{e.diff_xi(0), sp, sm}}) {
      const Complex exact = d.d.eval(p);
      const Complex fd = (e.eval(d.plus) - e.eval(d.minus)) / (2.0 * h);
      const double scale = std::max(1.0, std::abs(exact));
      if (scale > 1e4) continue;
      CHECK(std::abs(exact - fd) <= 1e-6 * scale);
      ++checked;
    }
  }
  CHECK(checked > 300);
}

TEST_CASE("profiles and their derivatives") {
  // B(0) = 1, B vanishes outside (-1, 1); S rises from 0 to 1.
  CHECK(bump_derivative(0.0, 0) == doctest::Approx(1.0));
  CHECK(bump_derivative(1.0, 0) == 0.0);
  CHECK(bump_derivative(-1.5, 2) == 0.0);
  CHECK(step_derivative(-0.1, 0) == 0.0);
  CHECK(step_derivative(1.1, 0) == 1.0);
  CHECK(step_derivative(0.5, 0) == doctest::Approx(0.5));
  for (int k = 0; k < 4; ++k) {
    for (double s : {-0.7, -0.2, 0.3, 0.8}) {
      const double h = 1e-6;
      const double fd = (bump_derivative(s + h, k) - bump_derivative(s - h, k)) / (2 * h);
      CHECK(bump_derivative(s, k + 1) == doctest::Approx(fd).epsilon(1e-5));
      const double fs = (step_derivative(s + 0.5 * h, k) - step_derivative(s - 0.5 * h, k)) / h;
      if (s > 0.0 && s < 1.0) CHECK(step_derivative(s, k + 1) == doctest::Approx(fs).epsilon(1e-4));
    }
  }
}

TEST_CASE("seminorm_c examples") {
  const SamplingBox box = SamplingBox::for_domain(1, 2 * M_PI, 64, 1000.0, 1.0);
  const SymbolExpr a{xi0, 1.0, 1};
  const double c00 = seminorm_c(a, 1.0, {0, 0}, {0, 0}, box);
  CHECK(c00 >= 0.99);
  CHECK(c00 < 1.0);
  CHECK(seminorm_c(a, 1.0, {1, 0}, {0, 0}, box) == 1.0);

  // Oracle: the same weighted quantity on a 10x finer x lattice.
  const SymbolExpr b{Expr::sin(x0) * xi0, 1.0, 1};
  const double got = seminorm_c(b, 1.0, {0, 0}, {1, 0}, box);
  double oracle = 0.0;
  for (int j = 0; j < 640; ++j) {
    const double x = 2 * M_PI * j / 640;
    for (const auto& xi : box.xi_points()) {
      oracle = std::max(oracle, std::abs(std::cos(x)) * std::abs(xi[0]) / (1.0 + std::abs(xi[0])));
    }
  }
  CHECK(got >= 0.99);
  CHECK(got < 1.0);
  CHECK(std::abs(got - oracle) < 1e-3);
}

TEST_CASE("seminorm_c is monotone under box growth and refinement") {
  const SymbolExpr s{Expr::sin(3.0 * x0) * Expr::japanese_bracket(0.5, 1) + Expr::cos(x0) * xi0, 1.0, 1};
  const SamplingBox small = SamplingBox::for_domain(1, 2 * M_PI, 32, 256.0, 1.0);
  SamplingBox bigger = small;
  bigger.xi_max = 1024.0;
  SamplingBox finer = small;
  finer.x_step = small.x_step / 2;
  finer.xi_step = small.xi_step / 2;
  for (int b = 0; b <= 2; ++b) {
    const double v0 = seminorm_c(s, 1.0, {0, 0}, {b, 0}, small);
    CHECK(seminorm_c(s, 1.0, {0, 0}, {b, 0}, bigger) >= v0);
    CHECK(seminorm_c(s, 1.0, {0, 0}, {b, 0}, finer) >= v0);
  }
}

TEST_CASE("declared order keeps seminorm_c bounded as xi_max doubles") {
  const std::vector<SymbolExpr> syms = {
      {(Expr::constant(2.0) + Expr::sin(x0)) * xi0, 1.0, 1},
      {Expr::japanese_bracket(1.0, 1) * Expr::cos(x0), 1.0, 1},
      {Expr::sin(x0) + Expr::constant(Complex(0, 0.5)), 0.0, 1},
  };
  for (const auto& s : syms) {
    for (int a = 0; a <= 2; ++a) {
      SamplingBox b1 = SamplingBox::for_domain(1, 2 * M_PI, 32, 2048.0, 1.0);
      SamplingBox b2 = b1;
      b2.xi_max = 4096.0;
      const double v1 = seminorm_c(s, s.declared_order, {a, 0}, {1, 0}, b1);
      const double v2 = seminorm_c(s, s.declared_order, {a, 0}, {1, 0}, b2);
      CHECK(v2 <= 1.05 * v1 + 1e-300);
    }
  }
}

TEST_CASE("seminorm_q examples") {
  const SamplingBox box = SamplingBox::for_domain(1, 2 * M_PI, 64, 1000.0, 1.0);
  const SymbolExpr a{xi0, 1.0, 1};
  const double c00 = seminorm_c(a, 1.0, {0, 0}, {0, 0}, box);
  const double c10 = seminorm_c(a, 1.0, {1, 0}, {0, 0}, box);
  CHECK(seminorm_q(a, 1.0, 1, 1, box) == std::max(c00, c10));
  CHECK(seminorm_q(a, 1.0, 1, 1, box) == 1.0);
  const SymbolExpr z{Expr(), 0.0, 1};
  CHECK(seminorm_q(z, 0.0, 3, 3, box) == 0.0);
  const SymbolExpr s{Expr::sin(x0) * Expr::japanese_bracket(0.5, 1), 0.5, 1};
  for (int k = 0; k < 3; ++k) CHECK(seminorm_q(s, 0.5, k + 1, 2, box) >= seminorm_q(s, 0.5, k, 2, box));
}

TEST_CASE("seminorm_Q examples") {
  SamplingBox box = SamplingBox::for_domain(1, 2 * M_PI, 64, 1000.0, 1.0);
  const SymbolExpr stat{Expr::cos(x0) * xi0, 1.0, 1};
  for (int j = 0; j < 3; ++j) CHECK(seminorm_Q(stat, 1.0, j, 1, 1, box) == seminorm_q(stat, 1.0, 1, 1, box));

  const SymbolExpr tx{Expr::t() * xi0, 1.0, 1};
  const double v = seminorm_Q(tx, 1.0, 1, 0, 0, box);
  CHECK(v >= 0.99);
  CHECK(v < 1.0);

  box.t_end = M_PI;
  const SymbolExpr st{Expr::sin(Expr::t()) * Expr::sin(x0), 0.0, 1};
  CHECK(std::abs(seminorm_Q(st, 0.0, 2, 0, 0, box) - 1.0) <= 1e-4);
}

TEST_CASE("classify_log_type") {
  const SamplingBox box = SamplingBox::for_domain(1, 2 * M_PI, 32, 256.0, 1.0);
  GenSymbolFamily fixed;
  fixed.eps_grid = GenSymbolFamily::geometric_grid(0.1, 0.1, 6);
  fixed.base = [](double) {
    return HyperbolicSymbol{{(Expr::constant(2.0) + Expr::sin(x0)) * xi0, 1.0, 1}, {}, {}};
  };
  const LogTypeVerdict v = classify_log_type(fixed, SymbolPart::kA1, 1.0, 1, 1, box);
  CHECK(v.is_log_type);
  const double Q = seminorm_Q(fixed.base(0.1).a1, 1.0, 0, 1, 1, box);
  CHECK(std::abs(v.fitted_coeff) <= 0.01 * Q);

  GenSymbolFamily blow = fixed;
  blow.base = [](double eps) {
    return HyperbolicSymbol{{(1.0 / eps) * Expr::sin(x0) * xi0, 1.0, 1}, {}, {}};
  };
  CHECK_FALSE(classify_log_type(blow, SymbolPart::kA1, 1.0, 0, 0, box).is_log_type);

  GenSymbolFamily few = fixed;
  few.eps_grid = {0.1, 0.01, 0.001};
  CHECK_THROWS_AS(classify_log_type(few, SymbolPart::kA1, 1.0, 0, 0, box), Error);
}

TEST_CASE("classify_slow_scale") {
  const auto eps = GenSymbolFamily::geometric_grid(0.1, 0.1, 6);
  EpsSeries c{eps, std::vector<double>(eps.size(), 3.0)};
  CHECK(classify_slow_scale(c).is_slow_scale);
  EpsSeries lg{eps, {}};
  EpsSeries root{eps, {}};
  for (double e : eps) {
    lg.values.push_back(std::log(1.0 / e));
    root.values.push_back(std::pow(e, -0.5));
  }
  CHECK(classify_slow_scale(lg).is_slow_scale);
  const SlowScaleVerdict r = classify_slow_scale(root);
  CHECK_FALSE(r.is_slow_scale);
  CHECK(r.largest_p == 2);
}

TEST_CASE("real-valued first-order part stays real") {
  const Expr a1 = (Expr::constant(1.5) + Expr::cos(2.0 * x0)) * xi0 + Expr::sin(x0);
  const SamplingBox box = SamplingBox::for_domain(1, 2 * M_PI, 32, 1024.0, 1.0);
  for (const auto& x : box.x_points()) {
    for (const auto& xi : box.xi_points()) {
      SymbolPoint p;
      p.x = x;
      p.xi = xi;
      const Complex v = a1.eval(p);
      CHECK(std::abs(v.imag()) <= 1e-14 * std::abs(v));
    }
  }
}

TEST_CASE("expression JSON round-trip") {
  const std::vector<Expr> es = {
      Expr::smooth_bump(x0, 1.0, 0.5) * xi0 + Expr::constant(Complex(0.2, -0.1)),
      Expr::power(Expr::cos(x0), 3) * Expr::japanese_bracket(1.0, 1),
      Expr::smooth_step(Expr::t(), 0.25, 2.0, 1) * Expr::xi(0),
  };
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (const auto& e : es) {
    const std::string text = expr_to_json_text(e);
    const Expr back = expr_from_json_text(text);
    CHECK(expr_to_json_text(back) == text);
    for (int i = 0; i < 10; ++i) {
      const SymbolPoint p = pt(u(rng), u(rng), 5.0 * u(rng));
      CHECK(back.eval(p) == e.eval(p));
    }
  }
  CHECK_THROWS_AS(expr_from_json_text(R"({"tan": "x0"})"), Error);
}
