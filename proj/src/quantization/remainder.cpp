#include <algorithm>
#include <cmath>
#include <set>

#include "common/quadrature.hpp"
#include "hyps/quantization.hpp"
#include "quantization/separable.hpp"

namespace hyps {

void OscIntConfig::validate(int dim, int max_alpha) const {
  if (2 * lambda <= dim) throw Error(ErrorKind::kInvalidArgument, "need 2*lambda > n");
  if (2 * l_order <= dim + max_alpha) {
    throw Error(ErrorKind::kInvalidArgument, "need 2*l_order > n + |alpha|");
  }
  if (theta_nodes < 1) throw Error(ErrorKind::kInvalidArgument, "theta_nodes must be >= 1");
  if (!(y_half > 0.0) || !(eta_half > 0.0)) {
    throw Error(ErrorKind::kEmptyBox, "oscillatory-integral box must be non-empty");
  }
  if (!(density > 0.0) || panel_nodes < 2) {
    throw Error(ErrorKind::kInvalidArgument, "quadrature density and panel nodes must be positive");
  }
}

namespace {

double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

struct Nodes {
  std::vector<double> y, wy, eta, weta;
  std::vector<char> y_shell, eta_shell;
};

Nodes make_nodes(const OscIntConfig& cfg) {
  const int panels =
      std::max(2, static_cast<int>(std::ceil(cfg.density * cfg.y_half * cfg.eta_half / M_PI)));
  const quad::Rule rule = quad::gauss_legendre(cfg.panel_nodes);
  Nodes n;
  for (const auto& [p, w] : quad::composite(-cfg.y_half, cfg.y_half, panels, rule)) {
    n.y.push_back(p);
    n.wy.push_back(w);
    n.y_shell.push_back(std::abs(p) > 0.8 * cfg.y_half);
  }
  for (const auto& [p, w] : quad::composite(-cfg.eta_half, cfg.eta_half, panels, rule)) {
    n.eta.push_back(p);
    n.weta.push_back(w);
    n.eta_shell.push_back(std::abs(p) > 0.8 * cfg.eta_half);
  }
  return n;
}

// Coefficient of w^(2q - r)(y) F^(r) in (1 - d_y^2)^l [w F].
struct YCoeff {
  int r;
  int wderiv;
  double c;
};

std::vector<YCoeff> y_coefficients(int l) {
  std::vector<YCoeff> out;
  for (int q = 0; q <= l; ++q) {
    for (int r = 0; r <= 2 * q; ++r) {
      out.push_back({r, 2 * q - r, binom(l, q) * (q % 2 == 0 ? 1.0 : -1.0) * binom(2 * q, r)});
    }
  }
  return out;
}

// w^(k)(y) for w = <y>^(-2 lambda), k = 0..kmax, at every node.
std::vector<std::vector<double>> weight_derivatives(int lambda, int kmax,
                                                    const std::vector<double>& y) {
  Expr w = Expr::japanese_bracket(-2.0 * lambda, 1);
  std::vector<std::vector<double>> out;
  for (int k = 0; k <= kmax; ++k) {
    std::vector<double> v(y.size());
    SymbolPoint p;
    for (std::size_t i = 0; i < y.size(); ++i) {
      p.xi[0] = y[i];
      v[i] = w.eval(p).real();
    }
    out.push_back(std::move(v));
    w = w.diff_xi(0);
  }
  return out;
}

// Quadrature bands covering +-[h, 8h] outside a box of half-width h.
struct OuterBands {
  std::vector<std::vector<double>> nodes, weights;
  double far = 0.0;  // 8h; beyond it a power-law envelope is used
};

OuterBands outer_bands(double h) {
  OuterBands ob;
  const quad::Rule rule = quad::gauss_legendre(8);
  for (double lo : {h, 2.0 * h, 4.0 * h}) {
    for (double sgn : {1.0, -1.0}) {
      std::vector<double> nd, wt;
      for (const auto& [p, w] : quad::composite(lo, 2.0 * lo, 8, rule)) {
        nd.push_back(sgn * p);
        wt.push_back(w);
      }
      ob.nodes.push_back(std::move(nd));
      ob.weights.push_back(std::move(wt));
    }
  }
  ob.far = 8.0 * h;
  return ob;
}

}  // namespace

RemainderTable remainder_theta_table(const SymbolExpr& s, double t, const std::vector<double>& xs,
                                     const std::vector<double>& xis, const OscIntConfig& cfg,
                                     const MultiIndex& alpha, const MultiIndex& beta) {
  cfg.validate(s.dim, order_of(alpha));
  RemainderTable tab;
  const quad::Rule tr = quad::gauss_legendre(cfg.theta_nodes);
  for (int i = 0; i < cfg.theta_nodes; ++i) {
    tab.theta.push_back(0.5 * (tr.nodes[i] + 1.0));
    tab.theta_weights.push_back(0.5 * tr.weights[i]);
  }
  const std::size_t nth = tab.theta.size();
  tab.r.assign(nth, std::vector<std::vector<Complex>>(
                        xis.size(), std::vector<Complex>(xs.size(), Complex{0.0, 0.0})));
  if (!s.expr.depends_on_any_x()) return tab;
  if (s.dim != 1) {
    throw Error(ErrorKind::kDimensionMismatch,
                "oscillatory-integral remainder is implemented for x-dependent 1-D symbols only");
  }
  const int lam = cfg.lambda;
  const int l = cfg.l_order;
  const int a0 = alpha[0];
  const int b0 = beta[0];

  const Nodes nd = make_nodes(cfg);
  const std::size_t ny = nd.y.size();
  const std::size_t ne = nd.eta.size();
  const auto ycoef = y_coefficients(l);
  const auto wder = weight_derivatives(lam, 2 * l, nd.y);
  std::vector<double> eta_weight(ne);
  for (std::size_t b = 0; b < ne; ++b) {
    eta_weight[b] = nd.weta[b] * std::pow(1.0 + nd.eta[b] * nd.eta[b], -static_cast<double>(l));
  }
  // E_ab = W_a exp(-i y_a eta_b); eta weights folded into B.
  Eigen::MatrixXcd E(ny, ne);
  for (std::size_t a = 0; a < ny; ++a) {
    for (std::size_t b = 0; b < ne; ++b) {
      E(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
          nd.wy[a] * std::polar(1.0, -nd.y[a] * nd.eta[b]);
    }
  }
  const double inv2pi = 1.0 / (2.0 * M_PI);

  // Reference magnitude |d_x d_xi a| over the y window for the tail test.
  double scale = 0.0;
  {
    const Expr d = s.expr.derivative(0, {1 + a0, 0}, {1 + b0, 0});
    SymbolPoint p;
    p.t = t;
    for (double x : xs) {
      for (double xi : xis) {
        for (std::size_t a = 0; a < ny; a += 4) {
        p.x[0] = x + nd.y[a];
        p.xi[0] = xi;
        scale = std::max(scale, std::abs(d.eval(p)));
        }
      }
    }
  }
  double tail = 0.0;

  // Outside-box envelopes: int |w^(j)| over each y band, int <eta>^(-2l) over each eta band,
  // and power-law far tails (both signs).
  const OuterBands yb = outer_bands(cfg.y_half);
  const OuterBands eb = outer_bands(cfg.eta_half);
  std::vector<std::vector<double>> wy_band(2 * l + 1, std::vector<double>(yb.nodes.size(), 0.0));
  std::vector<double> wy_far(2 * l + 1);
  for (std::size_t bnd = 0; bnd < yb.nodes.size(); ++bnd) {
    const auto wd = weight_derivatives(lam, 2 * l, yb.nodes[bnd]);
    for (int j = 0; j <= 2 * l; ++j) {
      for (std::size_t q = 0; q < yb.nodes[bnd].size(); ++q) {
        wy_band[j][bnd] += yb.weights[bnd][q] * std::abs(wd[j][q]);
      }
    }
  }
  {
    const auto wd = weight_derivatives(lam, 2 * l, {yb.far});
    for (int j = 0; j <= 2 * l; ++j) wy_far[j] = 2.0 * std::abs(wd[j][0]) * yb.far / (2 * lam - 1);
  }
  std::vector<double> we_band(eb.nodes.size(), 0.0), eta_out, eta_out_w;
  for (std::size_t bnd = 0; bnd < eb.nodes.size(); ++bnd) {
    for (std::size_t q = 0; q < eb.nodes[bnd].size(); ++q) {
      const double e = eb.nodes[bnd][q];
      const double w = eb.weights[bnd][q] * std::pow(1.0 + e * e, -static_cast<double>(l));
      we_band[bnd] += w;
      eta_out.push_back(e);
      eta_out_w.push_back(w);
    }
  }
  const std::size_t neo = eta_out.size();
  // Fourier kernel of the y quadrature at the outer eta nodes.
  Eigen::MatrixXcd Eo(neo, ny);
  for (std::size_t b = 0; b < neo; ++b) {
    for (std::size_t a = 0; a < ny; ++a) {
      Eo(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) =
          nd.wy[a] * std::polar(1.0, -nd.y[a] * eta_out[b]);
    }
  }
  const double we_far =
      2.0 * std::pow(1.0 + eb.far * eb.far, -static_cast<double>(l)) * eb.far / (2 * l - 1);

  const Decomposition dec = cfg.direct ? Decomposition{{}, {s.expr}} : decompose(s.expr);

  // Separable terms.
  for (const auto& term : dec.terms) {
    std::vector<Expr> fder, gder;
    {
      Expr f = term.fx.derivative(0, {0, 0}, {1 + b0, 0});
      for (int r = 0; r <= 2 * l; ++r) {
        fder.push_back(f);
        f = f.diff_x(0);
      }
      Expr g = term.gxi.derivative(0, {1 + a0, 0}, {0, 0});
      for (int p = 0; p <= 2 * lam; ++p) {
        if (p % 2 == 0) gder.push_back(g);
        g = g.diff_xi(0);
      }
    }
    bool all_zero = true;
    for (const auto& f : fder) all_zero = all_zero && f.is_zero();
    if (all_zero) continue;
    // A(x_i, y_a).
    std::vector<Eigen::VectorXcd> A(xs.size(), Eigen::VectorXcd::Zero(ny));
    std::vector<double> a_l1(xs.size(), 0.0), a_tail(xs.size(), 0.0);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      SymbolPoint p;
      p.t = t;
      for (std::size_t a = 0; a < ny; ++a) {
        p.x[0] = xs[i] + nd.y[a];
        std::vector<Complex> fv(fder.size());
        for (std::size_t r = 0; r < fder.size(); ++r) fv[r] = std::conj(fder[r].eval(p));
        Complex acc{0.0, 0.0};
        for (const auto& yc : ycoef) acc += yc.c * wder[yc.wderiv][a] * fv[yc.r];
        A[i](static_cast<Eigen::Index>(a)) = acc;
        a_l1[i] += nd.wy[a] * std::abs(acc);
      }
      // Envelope of the integrand outside |y| <= y_half.
      std::vector<std::vector<double>> fsup(fder.size(), std::vector<double>(yb.nodes.size(), 0.0));
      std::vector<double> fall(fder.size(), 0.0);
      for (std::size_t bnd = 0; bnd < yb.nodes.size(); ++bnd) {
        for (double y : yb.nodes[bnd]) {
          p.x[0] = xs[i] + y;
          for (std::size_t r = 0; r < fder.size(); ++r) {
            const double v = std::abs(fder[r].eval(p));
            fsup[r][bnd] = std::max(fsup[r][bnd], v);
            fall[r] = std::max(fall[r], v);
          }
        }
      }
      for (const auto& yc : ycoef) {
        double acc = fall[yc.r] * wy_far[yc.wderiv];
        for (std::size_t bnd = 0; bnd < yb.nodes.size(); ++bnd) {
          acc += fsup[yc.r][bnd] * wy_band[yc.wderiv][bnd];
        }
        a_tail[i] += std::abs(yc.c) * acc;
      }
    }
    // |A^(eta)| on the outer eta nodes: the eta tail keeps the decay of the y transform.
    std::vector<Eigen::VectorXd> a_hat(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) a_hat[i] = (Eo * A[i]).cwiseAbs();
    for (std::size_t th = 0; th < nth; ++th) {
      const double theta = tab.theta[th];
      for (std::size_t k = 0; k < xis.size(); ++k) {
        Eigen::VectorXcd B(ne);
        double b_l1 = 0.0;
        SymbolPoint p;
        p.t = t;
        auto gsum = [&](double eta) {
          p.xi[0] = xis[k] + theta * eta;
          Complex acc{0.0, 0.0};
          double tp = 1.0;
          for (int q = 0; q <= lam; ++q) {
            acc += binom(lam, q) * tp * std::conj(gder[q].eval(p));
            tp *= -theta * theta;
          }
          return acc;
        };
        for (std::size_t b = 0; b < ne; ++b) {
          B(static_cast<Eigen::Index>(b)) = eta_weight[b] * gsum(nd.eta[b]);
          b_l1 += std::abs(B(static_cast<Eigen::Index>(b)));
        }
        double b_tail = 0.0, gall = 0.0;
        Eigen::VectorXd g_out(neo);
        std::size_t q0 = 0;
        for (std::size_t bnd = 0; bnd < eb.nodes.size(); ++bnd) {
          double gs = 0.0;
          for (double e : eb.nodes[bnd]) {
            g_out(static_cast<Eigen::Index>(q0)) = eta_out_w[q0] * std::abs(gsum(e));
            gs = std::max(gs, std::abs(gsum(e)));
            ++q0;
          }
          gall = std::max(gall, gs);
          b_tail += gs * we_band[bnd];
        }
        b_tail += gall * we_far;
        const Eigen::VectorXcd V = E * B;
        for (std::size_t i = 0; i < xs.size(); ++i) {
          tab.r[th][k][i] += (A[i].array() * V.array()).sum() * inv2pi;
          const double eta_tail = a_hat[i].dot(g_out) + a_l1[i] * gall * we_far;
          tail = std::max(tail, (a_tail[i] * b_l1 + eta_tail + a_tail[i] * b_tail) * inv2pi);
        }
      }
    }
  }

  // Jointly dependent terms: direct tensor quadrature.
  for (const auto& e : dec.mixed) {
    std::vector<std::vector<Expr>> der(lam + 1, std::vector<Expr>(2 * l + 1));
    for (int q = 0; q <= lam; ++q) {
      Expr eq = e.derivative(0, {2 * q + 1 + a0, 0}, {1 + b0, 0});
      for (int r = 0; r <= 2 * l; ++r) {
        der[q][r] = eq;
        eq = eq.diff_x(0);
      }
    }
    for (std::size_t th = 0; th < nth; ++th) {
      const double theta = tab.theta[th];
      std::vector<double> pc(lam + 1);
      double tp = 1.0;
      for (int q = 0; q <= lam; ++q) {
        pc[q] = binom(lam, q) * tp;
        tp *= -theta * theta;
      }
      for (std::size_t k = 0; k < xis.size(); ++k) {
        for (std::size_t i = 0; i < xs.size(); ++i) {
          Complex acc{0.0, 0.0};
          double l1 = 0.0, shell = 0.0;
          SymbolPoint p;
          p.t = t;
          for (std::size_t a = 0; a < ny; ++a) {
            p.x[0] = xs[i] + nd.y[a];
            for (std::size_t b = 0; b < ne; ++b) {
              p.xi[0] = xis[k] + theta * nd.eta[b];
              Complex inner{0.0, 0.0};
              for (const auto& yc : ycoef) {
                Complex ps{0.0, 0.0};
                for (int q = 0; q <= lam; ++q) ps += pc[q] * std::conj(der[q][yc.r].eval(p));
                inner += yc.c * wder[yc.wderiv][a] * ps;
              }
              const Complex v = E(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) *
                                eta_weight[b] * inner;
              acc += v;
              const double m = std::abs(v);
              l1 += m;
              if (nd.y_shell[a] || nd.eta_shell[b]) shell += m;
            }
          }
          tab.r[th][k][i] += acc * inv2pi;
          tail = std::max(tail, shell * inv2pi);
        }
      }
    }
  }

  double rmax = 0.0;
  for (const auto& a : tab.r) {
    for (const auto& b : a) {
      for (const auto& v : b) rmax = std::max(rmax, std::abs(v));
    }
  }
  const double ref = std::max(scale, rmax);
  tab.tail_bound = ref > 0.0 ? tail / ref : 0.0;
  if (tab.tail_bound > cfg.tail_tol) {
    throw Error(ErrorKind::kBoxTooSmall, "oscillatory-integral tail estimate " +
                                             std::to_string(tab.tail_bound) +
                                             " exceeds tolerance; enlarge y/eta box");
  }
  return tab;
}

RemainderValue adjoint_symbol_remainder(const SymbolExpr& s, double t,
                                        const std::array<double, 2>& x,
                                        const std::array<double, 2>& xi, const OscIntConfig& cfg,
                                        const MultiIndex& alpha, const MultiIndex& beta) {
  RemainderValue out;
  if (!s.expr.depends_on_any_x()) {
    cfg.validate(s.dim, order_of(alpha));
    return out;
  }
  const RemainderTable tab = remainder_theta_table(s, t, {x[0]}, {xi[0]}, cfg, alpha, beta);
  Complex acc{0.0, 0.0};
  for (std::size_t th = 0; th < tab.theta.size(); ++th) acc += tab.theta_weights[th] * tab.r[th][0][0];
  out.value = Complex(0.0, -1.0) * acc;
  out.tail_bound = tab.tail_bound;
  return out;
}

RemainderEstimate check_remainder_estimate(const SymbolExpr& s, const MultiIndex& alpha,
                                           const MultiIndex& beta, const OscIntConfig& cfg,
                                           const SamplingBox& box, double t) {
  if (s.dim != box.dim) throw Error(ErrorKind::kDimensionMismatch, "symbol and box dims differ");
  RemainderEstimate est;
  const int n = s.dim;
  const int k = n + 2 + order_of(alpha);
  const int l = k + order_of(beta);
  est.rhs_seminorm = seminorm_q(s, 1.0, k, l, box, t);
  if (!s.expr.depends_on_any_x()) {
    cfg.validate(n, order_of(alpha));
    return est;
  }
  const std::vector<double> xs = box.x_samples(0);
  std::set<double> ladder{0.0, box.xi_max, -box.xi_max};
  for (double v = 1.0; v <= box.xi_max; v *= 2.0) {
    ladder.insert(v);
    ladder.insert(-v);
  }
  const std::vector<double> xis(ladder.begin(), ladder.end());
  const RemainderTable tab = remainder_theta_table(s, t, xs, xis, cfg, alpha, beta);
  for (const auto& per_theta : tab.r) {
    for (std::size_t kk = 0; kk < xis.size(); ++kk) {
      const double w = std::pow(1.0 + std::abs(xis[kk]), order_of(alpha));
      for (const auto& v : per_theta[kk]) est.lhs = std::max(est.lhs, w * std::abs(v));
    }
  }
  est.tail_bound = tab.tail_bound;
  est.ratio = est.rhs_seminorm > 0.0 ? est.lhs / est.rhs_seminorm : 0.0;
  return est;
}

}  // namespace hyps
