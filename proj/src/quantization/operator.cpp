#include <algorithm>
#include <cmath>

#include "hyps/quantization.hpp"
#include "quantization/fft.hpp"
#include "quantization/separable.hpp"

namespace hyps {

namespace {

constexpr std::size_t kExactSupLimit = std::size_t{1} << 20;
constexpr std::size_t kMixedCacheLimit = std::size_t{1} << 20;

struct TermCache {
  Expr fx;
  Expr gxi;
  std::vector<Complex> f;  // cached when t-independent
  std::vector<Complex> g;
};

}  // namespace

struct Quantized::Impl {
  Grid grid;
  QuantizeOptions opt;
  std::shared_ptr<const fft::Plan> plan;
  std::size_t n = 0;
  std::vector<std::array<double, 2>> xs;
  std::vector<std::array<double, 2>> freqs;
  std::vector<char> band;
  std::vector<TermCache> terms;
  std::vector<Expr> mixed;
  std::vector<Complex> roots;  // exp(2 pi i r / M)
  std::vector<std::vector<Complex>> mixed_cache;  // s(x_j, xi_k) e_jk, row j

  Complex phase(std::size_t j, std::size_t k) const {
    const std::size_t M = static_cast<std::size_t>(grid.M);
    if (grid.dim == 1) return roots[(j * k) % M];
    return roots[((j / M) * (k / M)) % M] * roots[((j % M) * (k % M)) % M];
  }

  void sample_f(const Expr& e, double t, std::vector<Complex>& out) const {
    out.resize(n);
    if (e.is_constant()) {
      std::fill(out.begin(), out.end(), e.constant_value());
      return;
    }
    SymbolPoint p;
    p.t = t;
    for (std::size_t j = 0; j < n; ++j) {
      p.x = xs[j];
      out[j] = e.eval(p);
    }
  }

  void sample_g(const Expr& e, double t, std::vector<Complex>& out) const {
    out.resize(n);
    if (e.is_constant()) {
      std::fill(out.begin(), out.end(), e.constant_value());
      return;
    }
    SymbolPoint p;
    p.t = t;
    for (std::size_t k = 0; k < n; ++k) {
      p.xi = freqs[k];
      out[k] = e.eval(p);
    }
  }

  const std::vector<Complex>& f_at(const TermCache& tc, double t, std::vector<Complex>& scratch) const {
    if (!tc.f.empty()) return tc.f;
    sample_f(tc.fx, t, scratch);
    return scratch;
  }

  const std::vector<Complex>& g_at(const TermCache& tc, double t, std::vector<Complex>& scratch) const {
    if (!tc.g.empty()) return tc.g;
    sample_g(tc.gxi, t, scratch);
    return scratch;
  }

  Complex mixed_value(std::size_t j, std::size_t k, double t) const {
    SymbolPoint p;
    p.t = t;
    p.x = xs[j];
    p.xi = freqs[k];
    Complex s{0.0, 0.0};
    for (const auto& e : mixed) s += e.eval(p);
    return s * phase(j, k);
  }

  void project(Complex* v) const {
    std::vector<Complex> c(n);
    plan->forward(v, c.data());
    const double s = 1.0 / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) c[k] = band[k] ? c[k] * s : Complex{0.0, 0.0};
    plan->backward(c.data(), v);
  }
};

Quantized::Quantized(const SymbolExpr& s, const Grid& g, QuantizeOptions opt)
    : impl_(std::make_unique<Impl>()) {
  g.validate();
  if (s.dim != g.dim) throw Error(ErrorKind::kDimensionMismatch, "symbol and grid dims differ");
  Impl& m = *impl_;
  m.grid = g;
  m.opt = opt;
  m.plan = fft::Plan::get(g.dim, g.M);
  m.n = g.size();
  m.xs.resize(m.n);
  m.freqs.resize(m.n);
  m.band.resize(m.n);
  for (std::size_t i = 0; i < m.n; ++i) {
    m.xs[i] = g.point(i);
    m.freqs[i] = g.frequency_point(i);
    m.band[i] = g.in_band(i) ? 1 : 0;
  }
  m.roots.resize(g.M);
  for (int r = 0; r < g.M; ++r) m.roots[r] = std::polar(1.0, 2.0 * M_PI * r / g.M);

  Decomposition d = decompose(s.expr, opt.max_separable_terms);
  for (auto& t : d.terms) {
    TermCache tc{t.fx, t.gxi, {}, {}};
    if (!tc.fx.depends_on_t()) m.sample_f(tc.fx, 0.0, tc.f);
    if (!tc.gxi.depends_on_t()) m.sample_g(tc.gxi, 0.0, tc.g);
    m.terms.push_back(std::move(tc));
  }
  m.mixed = std::move(d.mixed);
  bool mixed_t = false;
  for (const auto& e : m.mixed) mixed_t = mixed_t || e.depends_on_t();
  if (!m.mixed.empty() && !mixed_t && m.n * m.n <= kMixedCacheLimit) {
    m.mixed_cache.assign(m.n, std::vector<Complex>(m.n));
    for (std::size_t j = 0; j < m.n; ++j) {
      for (std::size_t k = 0; k < m.n; ++k) m.mixed_cache[j][k] = m.mixed_value(j, k, 0.0);
    }
  }
}

Quantized::~Quantized() = default;
Quantized::Quantized(Quantized&&) noexcept = default;
Quantized& Quantized::operator=(Quantized&&) noexcept = default;

const Grid& Quantized::grid() const { return impl_->grid; }
bool Quantized::band_projected() const { return impl_->opt.band_projected; }
std::size_t Quantized::separable_terms() const { return impl_->terms.size(); }
std::size_t Quantized::mixed_terms() const { return impl_->mixed.size(); }

void Quantized::apply(double t, const Complex* in, Complex* out) const {
  const Impl& m = *impl_;
  const std::size_t n = m.n;
  const double inv = 1.0 / static_cast<double>(n);
  std::vector<Complex> c(n), tmp(n), w(n), fs, gs;
  m.plan->forward(in, c.data());
  for (std::size_t k = 0; k < n; ++k) {
    c[k] *= inv;
    if (m.opt.band_projected && !m.band[k]) c[k] = 0.0;
  }
  std::fill(out, out + n, Complex{0.0, 0.0});
  for (const auto& tc : m.terms) {
    const auto& g = m.g_at(tc, t, gs);
    const auto& f = m.f_at(tc, t, fs);
    for (std::size_t k = 0; k < n; ++k) tmp[k] = g[k] * c[k];
    m.plan->backward(tmp.data(), w.data());
    for (std::size_t j = 0; j < n; ++j) out[j] += f[j] * w[j];
  }
  if (!m.mixed.empty()) {
    for (std::size_t j = 0; j < n; ++j) {
      Complex s{0.0, 0.0};
      if (!m.mixed_cache.empty()) {
        const auto& row = m.mixed_cache[j];
        for (std::size_t k = 0; k < n; ++k) s += row[k] * c[k];
      } else {
        for (std::size_t k = 0; k < n; ++k) {
          if (c[k] != Complex{0.0, 0.0}) s += m.mixed_value(j, k, t) * c[k];
        }
      }
      out[j] += s;
    }
  }
  if (m.opt.band_projected) m.project(out);
}

void Quantized::apply_adjoint(double t, const Complex* in, Complex* out) const {
  const Impl& m = *impl_;
  const std::size_t n = m.n;
  const double inv = 1.0 / static_cast<double>(n);
  std::vector<Complex> v(in, in + n), tmp(n), c(n), w(n), fs, gs;
  if (m.opt.band_projected) m.project(v.data());
  std::fill(out, out + n, Complex{0.0, 0.0});
  for (const auto& tc : m.terms) {
    const auto& g = m.g_at(tc, t, gs);
    const auto& f = m.f_at(tc, t, fs);
    for (std::size_t j = 0; j < n; ++j) tmp[j] = std::conj(f[j]) * v[j];
    m.plan->forward(tmp.data(), c.data());
    for (std::size_t k = 0; k < n; ++k) c[k] *= std::conj(g[k]) * inv;
    m.plan->backward(c.data(), w.data());
    for (std::size_t j = 0; j < n; ++j) out[j] += w[j];
  }
  if (!m.mixed.empty()) {
    std::vector<Complex> y(n, Complex{0.0, 0.0});
    for (std::size_t j = 0; j < n; ++j) {
      if (v[j] == Complex{0.0, 0.0}) continue;
      for (std::size_t k = 0; k < n; ++k) {
        const Complex s = m.mixed_cache.empty() ? m.mixed_value(j, k, t) : m.mixed_cache[j][k];
        y[k] += std::conj(s) * v[j];
      }
    }
    m.plan->backward(y.data(), w.data());
    for (std::size_t j = 0; j < n; ++j) out[j] += w[j] * inv;
  }
  if (m.opt.band_projected) m.project(out);
}

GridFunction Quantized::apply(double t, const GridFunction& u) const {
  if (u.grid != impl_->grid) throw Error(ErrorKind::kGridMismatch, "operand grid differs");
  u.check_finite();
  GridFunction v = GridFunction::zeros(u.grid);
  apply(t, u.values.data(), v.values.data());
  v.check_finite();
  return v;
}

GridFunction Quantized::apply_adjoint(double t, const GridFunction& u) const {
  if (u.grid != impl_->grid) throw Error(ErrorKind::kGridMismatch, "operand grid differs");
  u.check_finite();
  GridFunction v = GridFunction::zeros(u.grid);
  apply_adjoint(t, u.values.data(), v.values.data());
  v.check_finite();
  return v;
}

double Quantized::symbol_sup(double t) const {
  const Impl& m = *impl_;
  std::vector<std::size_t> ks;
  for (std::size_t k = 0; k < m.n; ++k) {
    if (!m.opt.band_projected || m.band[k]) ks.push_back(k);
  }
  std::vector<std::vector<Complex>> fsv, gsv;
  for (const auto& tc : m.terms) {
    std::vector<Complex> fs, gs;
    fsv.push_back(m.f_at(tc, t, fs));
    gsv.push_back(m.g_at(tc, t, gs));
  }
  const bool exact = m.n * ks.size() <= kExactSupLimit;
  if (!exact) {
    double bound = 0.0;
    for (std::size_t i = 0; i < fsv.size(); ++i) {
      double fmax = 0.0, gmax = 0.0;
      for (const auto& v : fsv[i]) fmax = std::max(fmax, std::abs(v));
      for (auto k : ks) gmax = std::max(gmax, std::abs(gsv[i][k]));
      bound += fmax * gmax;
    }
    if (!m.mixed.empty()) {
      double mm = 0.0;
      SymbolPoint p;
      p.t = t;
      for (std::size_t j = 0; j < m.n; ++j) {
        p.x = m.xs[j];
        for (auto k : ks) {
          p.xi = m.freqs[k];
          Complex s{0.0, 0.0};
          for (const auto& e : m.mixed) s += e.eval(p);
          mm = std::max(mm, std::abs(s));
        }
      }
      bound += mm;
    }
    return bound;
  }
  double best = 0.0;
  SymbolPoint p;
  p.t = t;
  for (std::size_t j = 0; j < m.n; ++j) {
    p.x = m.xs[j];
    for (auto k : ks) {
      Complex s{0.0, 0.0};
      for (std::size_t i = 0; i < fsv.size(); ++i) s += fsv[i][j] * gsv[i][k];
      if (!m.mixed.empty()) {
        p.xi = m.freqs[k];
        for (const auto& e : m.mixed) s += e.eval(p);
      }
      best = std::max(best, std::abs(s));
    }
  }
  return best;
}

GridFunction apply_op(const SymbolExpr& s, double t, const GridFunction& u) {
  return Quantized(s, u.grid).apply(t, u);
}

GridFunction apply_adjoint_op(const SymbolExpr& s, double t, const GridFunction& u) {
  return Quantized(s, u.grid).apply_adjoint(t, u);
}

Eigen::MatrixXcd op_matrix(const SymbolExpr& s, double t, const Grid& g) {
  g.validate();
  if (g.size() > 4096) throw Error(ErrorKind::kTooLarge, "op_matrix requires M^n <= 4096");
  const Quantized q(s, g);
  const std::size_t n = g.size();
  Eigen::MatrixXcd a(n, n);
  std::vector<Complex> e(n, Complex{0.0, 0.0}), col(n);
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    q.apply(t, e.data(), col.data());
    e[j] = 0.0;
    for (std::size_t i = 0; i < n; ++i) a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = col[i];
  }
  return a;
}

}  // namespace hyps
