#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "hyps/symbols.hpp"

namespace hyps {

SamplingBox SamplingBox::for_domain(int dim, double length, int x_points, double xi_max,
                                    double t_end) {
  SamplingBox b;
  b.dim = dim;
  b.x_lo = {0.0, 0.0};
  b.x_hi = {length, dim == 2 ? length : 0.0};
  b.x_step = length / x_points;
  b.xi_max = xi_max;
  b.xi_step = xi_max / (dim == 2 ? 8.0 : 32.0);
  b.t_end = t_end;
  return b;
}

void SamplingBox::validate() const {
  if (dim < 1 || dim > 2) throw Error(ErrorKind::kDimensionMismatch, "box dim must be 1 or 2");
  for (int a = 0; a < dim; ++a) {
    if (!(x_hi[a] > x_lo[a])) throw Error(ErrorKind::kEmptyBox, "empty x-range");
  }
  if (!(x_step > 0.0)) throw Error(ErrorKind::kEmptyBox, "x_step must be > 0");
  if (!(xi_max >= 0.0)) throw Error(ErrorKind::kEmptyBox, "xi_max must be >= 0");
  if (!(xi_step > 0.0)) throw Error(ErrorKind::kEmptyBox, "xi_step must be > 0");
  if (t_samples < 1 || !(t_end >= 0.0)) throw Error(ErrorKind::kEmptyBox, "empty t-range");
}

std::vector<double> SamplingBox::x_samples(int axis) const {
  std::vector<double> v;
  for (long j = 0;; ++j) {
    const double x = x_lo[axis] + static_cast<double>(j) * x_step;
    if (x >= x_hi[axis]) break;
    v.push_back(x);
  }
  return v;
}

std::vector<std::array<double, 2>> SamplingBox::x_points() const {
  validate();
  std::vector<std::array<double, 2>> pts;
  const auto xs = x_samples(0);
  if (dim == 1) {
    for (double x : xs) pts.push_back({x, 0.0});
    return pts;
  }
  const auto ys = x_samples(1);
  for (double x : xs) {
    for (double y : ys) pts.push_back({x, y});
  }
  return pts;
}

namespace {

std::vector<double> radii(double xi_max) {
  std::set<double> r{0.0, xi_max};
  for (double v = 1.0; v <= xi_max; v *= 2.0) r.insert(v);
  return {r.begin(), r.end()};
}

std::vector<double> lattice(double xi_max, double step) {
  std::vector<double> v;
  const long n = static_cast<long>(std::floor(xi_max / step + 1e-12));
  for (long j = -n; j <= n; ++j) v.push_back(static_cast<double>(j) * step);
  return v;
}

}  // namespace

std::vector<std::array<double, 2>> SamplingBox::xi_points() const {
  validate();
  std::set<std::array<double, 2>> pts;
  const auto lat = lattice(xi_max, xi_step);
  const auto rad = radii(xi_max);
  if (dim == 1) {
    for (double v : lat) pts.insert({v, 0.0});
    for (double r : rad) {
      pts.insert({r, 0.0});
      pts.insert({-r, 0.0});
    }
  } else {
    for (double a : lat) {
      for (double b : lat) pts.insert({a, b});
    }
    const double s = 1.0 / std::sqrt(2.0);
    const std::array<std::array<double, 2>, 4> dirs{{{1.0, 0.0}, {0.0, 1.0}, {s, s}, {s, -s}}};
    for (const auto& d : dirs) {
      for (double r : rad) {
        pts.insert({r * d[0], r * d[1]});
        pts.insert({-r * d[0], -r * d[1]});
      }
    }
  }
  return {pts.begin(), pts.end()};
}

std::vector<double> SamplingBox::t_points() const {
  validate();
  std::vector<double> v;
  if (t_samples == 1) return {0.0};
  for (int i = 0; i < t_samples; ++i) {
    v.push_back(t_end * static_cast<double>(i) / static_cast<double>(t_samples - 1));
  }
  return v;
}

namespace {

struct Sampled {
  std::vector<std::array<double, 2>> xs;
  std::vector<std::array<double, 2>> xis;
};

// max over samples of (1+|xi|)^w |e(t, x, xi)|.
double weighted_sup(const Expr& e, double w, const Sampled& s, double t) {
  if (e.is_zero()) return 0.0;
  const std::size_t nx = e.depends_on_any_x() ? s.xs.size() : 1;
  double best = 0.0;
  SymbolPoint p;
  p.t = t;
  // Without xi-dependence only the extreme weight matters.
  std::vector<std::array<double, 2>> one;
  if (!e.depends_on_any_xi() && !s.xis.empty()) {
    auto key = [](const std::array<double, 2>& v) { return std::hypot(v[0], v[1]); };
    const auto it = w >= 0.0 ? std::max_element(s.xis.begin(), s.xis.end(),
                                                [&](const auto& a, const auto& b) {
                                                  return key(a) < key(b);
                                                })
                             : std::min_element(s.xis.begin(), s.xis.end(),
                                                [&](const auto& a, const auto& b) {
                                                  return key(a) < key(b);
                                                });
    one.push_back(*it);
  }
  for (const auto& xi : one.empty() ? s.xis : one) {
    const double weight = std::pow(1.0 + std::hypot(xi[0], xi[1]), w);
    p.xi = xi;
    for (std::size_t i = 0; i < nx; ++i) {
      p.x = s.xs[i];
      const double v = std::abs(e.eval(p));
      if (!std::isfinite(v)) throw Error(ErrorKind::kNonFinite, "non-finite symbol sample");
      best = std::max(best, weight * v);
    }
  }
  return best;
}

Sampled sample(const SamplingBox& box) { return {box.x_points(), box.xi_points()}; }

struct Term {
  Expr e;
  int abs_alpha;
};

std::vector<Term> derivative_family(const Expr& base, int dim, int k, int l) {
  std::vector<Term> out;
  std::vector<MultiIndex> alphas, betas;
  for (int a0 = 0; a0 <= k; ++a0) {
    for (int a1 = 0; a1 <= (dim == 2 ? k - a0 : 0); ++a1) alphas.push_back({a0, a1});
  }
  for (int b0 = 0; b0 <= l; ++b0) {
    for (int b1 = 0; b1 <= (dim == 2 ? l - b0 : 0); ++b1) betas.push_back({b0, b1});
  }
  for (const auto& a : alphas) {
    const Expr ea = base.derivative(0, a, {0, 0});
    for (const auto& b : betas) out.push_back({ea.derivative(0, {0, 0}, b), order_of(a)});
  }
  return out;
}

void check_dim(const SymbolExpr& s, const SamplingBox& box) {
  if (s.dim != box.dim) throw Error(ErrorKind::kDimensionMismatch, "symbol and box dims differ");
}

}  // namespace

double seminorm_c(const SymbolExpr& s, double m, const MultiIndex& alpha, const MultiIndex& beta,
                  const SamplingBox& box, double t) {
  check_dim(s, box);
  const Sampled smp = sample(box);
  const Expr d = s.expr.derivative(0, alpha, beta);
  return weighted_sup(d, -m + order_of(alpha), smp, t);
}

double seminorm_q(const SymbolExpr& s, double m, int k, int l, const SamplingBox& box, double t) {
  check_dim(s, box);
  const Sampled smp = sample(box);
  double best = 0.0;
  for (const auto& term : derivative_family(s.expr, s.dim, k, l)) {
    best = std::max(best, weighted_sup(term.e, -m + term.abs_alpha, smp, t));
  }
  return best;
}

double seminorm_Q(const SymbolExpr& s, double m, int j, int k, int l, const SamplingBox& box) {
  check_dim(s, box);
  const Sampled smp = sample(box);
  const auto ts = box.t_points();
  double best = 0.0;
  Expr et = s.expr;
  for (int i = 0; i <= j; ++i) {
    if (i > 0) et = et.diff_t();
    if (et.is_zero()) break;
    const auto fam = derivative_family(et, s.dim, k, l);
    for (const auto& term : fam) {
      if (term.e.is_zero()) continue;
      if (!term.e.depends_on_t()) {
        best = std::max(best, weighted_sup(term.e, -m + term.abs_alpha, smp, 0.0));
        continue;
      }
      for (double t : ts) best = std::max(best, weighted_sup(term.e, -m + term.abs_alpha, smp, t));
    }
  }
  return best;
}

std::vector<double> GenSymbolFamily::geometric_grid(double eps0, double ratio, int count) {
  if (!(eps0 > 0.0 && eps0 <= 1.0)) throw Error(ErrorKind::kBadEps, "eps0 must lie in (0,1]");
  if (!(ratio > 0.0 && ratio < 1.0)) throw Error(ErrorKind::kBadEps, "ratio must lie in (0,1)");
  if (count < 1) throw Error(ErrorKind::kInsufficientSweep, "empty eps grid");
  std::vector<double> g;
  for (int i = 0; i < count; ++i) g.push_back(eps0 * std::pow(ratio, i));
  return g;
}

std::vector<double> GenSymbolFamily::log_grid(double eps_max, double eps_min, int count) {
  if (count < 2) return geometric_grid(eps_max, 0.5, std::max(count, 1));
  return geometric_grid(eps_max, std::pow(eps_min / eps_max, 1.0 / (count - 1)), count);
}

namespace {

const SymbolExpr& pick(const HyperbolicSymbol& h, SymbolPart part, SymbolExpr& scratch) {
  switch (part) {
    case SymbolPart::kA1: return h.a1;
    case SymbolPart::kA0: return h.a0;
    case SymbolPart::kFull: break;
  }
  scratch = h.full();
  return scratch;
}

// Sorted by decreasing eps.
EpsSeries sorted(const EpsSeries& s) {
  if (s.eps.size() != s.values.size()) {
    throw Error(ErrorKind::kInvalidArgument, "eps and value arrays differ in length");
  }
  std::vector<std::size_t> idx(s.eps.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return s.eps[a] > s.eps[b]; });
  EpsSeries out;
  for (auto i : idx) {
    out.eps.push_back(s.eps[i]);
    out.values.push_back(s.values[i]);
  }
  return out;
}

}  // namespace

EpsSeries seminorm_series(const GenSymbolFamily& fam, SymbolPart part, double m, int j, int k,
                          int l, const SamplingBox& box) {
  EpsSeries out;
  for (double eps : fam.eps_grid) {
    if (!(eps > 0.0 && eps <= 1.0)) throw Error(ErrorKind::kBadEps, "eps outside (0,1]");
    const HyperbolicSymbol h = fam.base(eps);
    SymbolExpr scratch;
    out.eps.push_back(eps);
    out.values.push_back(seminorm_Q(pick(h, part, scratch), m, j, k, l, box));
  }
  return out;
}

void require_sweep(const std::vector<double>& eps, const AsymptoticThresholds& th) {
  if (static_cast<int>(eps.size()) < th.min_points) {
    throw Error(ErrorKind::kInsufficientSweep,
                "need at least " + std::to_string(th.min_points) + " eps points");
  }
  for (double e : eps) {
    if (!(e > 0.0 && e <= 1.0)) throw Error(ErrorKind::kBadEps, "eps outside (0,1]");
  }
  const auto [lo, hi] = std::minmax_element(eps.begin(), eps.end());
  if (std::log10(*hi / *lo) < th.min_decades - 1e-9) {
    throw Error(ErrorKind::kInsufficientSweep, "eps grid spans fewer than " +
                                                   std::to_string(th.min_decades) + " decades");
  }
}

LogTypeVerdict classify_log_type(const EpsSeries& series, const AsymptoticThresholds& th) {
  require_sweep(series.eps, th);
  const EpsSeries s = sorted(series);
  const std::size_t n = s.eps.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0, yy = 0, ymax = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::log(1.0 / s.eps[i]);
    const double y = s.values[i];
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    yy += y * y;
    ymax = std::max(ymax, std::abs(y));
  }
  const double nn = static_cast<double>(n);
  const double den = nn * sxx - sx * sx;
  LogTypeVerdict v;
  v.fitted_coeff = den > 0.0 ? (nn * sxy - sx * sy) / den : 0.0;
  v.intercept = (sy - v.fitted_coeff * sx) / nn;
  double rr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = s.values[i] - (v.fitted_coeff * std::log(1.0 / s.eps[i]) + v.intercept);
    rr += r * r;
  }
  v.residual = yy > 0.0 ? std::sqrt(rr / yy) : 0.0;
  // Sampled sups of bounded families drift by a fraction of a percent; a
  // slope that small counts as non-negative.
  v.is_log_type = v.residual < th.log_type_residual && v.fitted_coeff >= -0.01 * ymax;
  return v;
}

LogTypeVerdict classify_log_type(const GenSymbolFamily& fam, SymbolPart part, double m, int k,
                                 int l, const SamplingBox& box, const AsymptoticThresholds& th) {
  require_sweep(fam.eps_grid, th);
  return classify_log_type(seminorm_series(fam, part, m, 0, k, l, box), th);
}

SlowScaleVerdict classify_slow_scale(const EpsSeries& series, const AsymptoticThresholds& th) {
  require_sweep(series.eps, th);
  const EpsSeries s = sorted(series);
  const std::size_t n = s.eps.size();
  const std::size_t tail = std::min(n, std::max<std::size_t>(3, (n + 1) / 2));
  SlowScaleVerdict v;
  for (int p = 1; p <= th.p_max; ++p) {
    bool ok = true;
    double prev = 0.0;
    bool have_prev = false;
    for (std::size_t i = n - tail; i < n; ++i) {
      if (s.values[i] <= 0.0) continue;
      const double z = p * std::log(s.values[i]) - std::log(1.0 / s.eps[i]);
      if (have_prev && z > prev + 1e-9 * (1.0 + std::abs(prev))) {
        ok = false;
        break;
      }
      prev = z;
      have_prev = true;
    }
    if (!ok) break;
    v.largest_p = p;
  }
  v.is_slow_scale = v.largest_p >= th.p_max;
  return v;
}

SlowScaleVerdict classify_slow_scale(const GenSymbolFamily& fam, SymbolPart part, int j, int k,
                                     int l, const SamplingBox& box,
                                     const AsymptoticThresholds& th) {
  require_sweep(fam.eps_grid, th);
  const double m = part == SymbolPart::kA0 ? 0.0 : 1.0;
  return classify_slow_scale(seminorm_series(fam, part, m, j, k, l, box), th);
}

}  // namespace hyps
