#include <cmath>

#include "common/quadrature.hpp"
#include "hyps/regularization.hpp"
#include "symbols/node.hpp"

namespace hyps {

double mollifier_profile(double r, double width) {
  if (r <= 1.0) return 1.0;
  return 1.0 - step_derivative((r - 1.0) / width, 0);
}

namespace {

const quad::Rule& rule16() {
  static const quad::Rule r = quad::gauss_legendre(16);
  return r;
}

}  // namespace

double Mollifier::kernel(const std::array<double, 2>& x) const {
  const double rmax = 1.0 + transition_width;
  const double ax = dim == 1 ? std::abs(x[0]) : std::hypot(x[0], x[1]);
  const int panels = 8 + 2 * static_cast<int>(std::ceil(ax * rmax / M_PI));
  double acc = 0.0;
  for (const auto& [r, w] : quad::composite(0.0, rmax, panels, rule16())) {
    const double p = fourier_profile(r);
    if (dim == 1) {
      acc += w * p * std::cos(ax * r);
    } else {
      acc += w * p * std::cyl_bessel_j(0.0, ax * r) * r;
    }
  }
  return dim == 1 ? acc / M_PI : acc / (2.0 * M_PI);
}

double ScaledMollifier::kernel(const std::array<double, 2>& y) const {
  const double s = base.dim == 1 ? omega : omega * omega;
  return s * base.kernel({omega * y[0], omega * y[1]});
}

double omega_of_eps(double eps, int k) {
  if (!(eps > 0.0 && eps < 1.0)) throw Error(ErrorKind::kBadEps, "eps must lie in (0,1)");
  if (k < 1) throw Error(ErrorKind::kInvalidArgument, "mollification order k must be >= 1");
  return std::pow(std::log(1.0 / eps), 1.0 / k);
}

GridFunction embed_data(const GridFunction& w, double eps, const Grid& target,
                        const Mollifier& moll) {
  if (w.grid != target) throw Error(ErrorKind::kGridMismatch, "data grid differs from target");
  if (!(eps > 0.0)) throw Error(ErrorKind::kBadEps, "eps must be > 0");
  if (moll.dim != target.dim) throw Error(ErrorKind::kDimensionMismatch, "mollifier dim");
  auto c = fourier_coefficients(w);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto f = target.frequency_point(i);
    c[i] *= moll.fourier_profile(eps * std::hypot(f[0], f[1]));
  }
  return from_fourier(target, c);
}

GridFunction embed_data(const std::function<Complex(const std::array<double, 2>&)>& w,
                        double eps, const Grid& target, const Mollifier& moll) {
  return embed_data(GridFunction::sample(target, w), eps, target, moll);
}

namespace detail {

namespace {

bool contains_rough(const Expr& e) {
  if (e.kind() == NodeKind::kRough) return true;
  for (const auto& c : e.children()) {
    if (contains_rough(c)) return true;
  }
  return false;
}

// Exact Fourier coefficient of a linear combination of rough leaves.
Complex exact_coefficient(const Expr& e, int m, double period, int axis) {
  switch (e.kind()) {
    case NodeKind::kConstant: return m == 0 ? e.constant_value() : Complex{0.0, 0.0};
    case NodeKind::kRough: {
      const auto& c = *e.rough_coefficient();
      if (c.axis() != axis) {
        throw Error(ErrorKind::kInvalidArgument, "rough coefficient axis differs from mollifier");
      }
      if (std::abs(c.period() - period) > 1e-12 * period) {
        throw Error(ErrorKind::kGridMismatch, "rough coefficient period differs from torus");
      }
      return c.fourier_coefficient(m);
    }
    case NodeKind::kSum: {
      Complex s{0.0, 0.0};
      for (const auto& c : e.children()) s += exact_coefficient(c, m, period, axis);
      return s;
    }
    case NodeKind::kProduct: {
      Complex scale{1.0, 0.0};
      const Expr* var = nullptr;
      for (const auto& c : e.children()) {
        if (c.is_constant()) {
          scale *= c.constant_value();
        } else if (var == nullptr) {
          var = &c;
        } else {
          var = nullptr;
          break;
        }
      }
      if (var != nullptr) return scale * exact_coefficient(*var, m, period, axis);
      break;
    }
    default: break;
  }
  throw Error(ErrorKind::kUnsupportedRoughKind,
              "rough coefficients may only enter a mollified source linearly");
}

}  // namespace

std::shared_ptr<const MollifiedData> mollified_weights(const Expr& source, double omega,
                                                       double period, int axis,
                                                       double transition_width) {
  if (source.depends_on_t() || source.depends_on_any_xi() || source.depends_on_x(1 - axis)) {
    throw Error(ErrorKind::kInvalidArgument,
                "mollified source must depend on x only through the mollified axis");
  }
  auto data = std::make_shared<MollifiedData>();
  data->axis = axis;
  data->period = period;
  data->omega = omega;
  data->transition_width = transition_width;
  const double cutoff = omega * (1.0 + transition_width);
  const double mm = cutoff * period / (2.0 * M_PI);
  if (mm > static_cast<double>(1 << 20)) {
    throw Error(ErrorKind::kTooLarge, "mollified coefficient needs too many Fourier modes");
  }
  int m_max = static_cast<int>(std::ceil(mm));
  std::vector<Complex> coeff;
  if (contains_rough(source)) {
    for (int m = 0; m <= m_max; ++m) coeff.push_back(exact_coefficient(source, m, period, axis));
  } else {
    int n = 256;
    while (n < 8 * (m_max + 1)) n *= 2;
    std::vector<double> samples(n);
    SymbolPoint p;
    for (int j = 0; j < n; ++j) {
      p.x[axis] = period * j / n;
      const Complex v = source.eval(p);
      if (std::abs(v.imag()) > 1e-14 * (1.0 + std::abs(v.real()))) {
        throw Error(ErrorKind::kInvalidArgument, "mollified source must be real valued");
      }
      samples[j] = v.real();
    }
    for (int m = 0; m <= m_max; ++m) {
      Complex acc{0.0, 0.0};
      for (int j = 0; j < n; ++j) {
        acc += samples[j] * std::polar(1.0, -2.0 * M_PI * m * j / n);
      }
      coeff.push_back(acc / static_cast<double>(n));
    }
  }
  for (int m = 0; m <= m_max; ++m) {
    const double kappa = 2.0 * M_PI * m / period;
    coeff[m] *= mollifier_profile(kappa / omega, transition_width);
  }
  while (coeff.size() > 1 && coeff.back() == Complex{0.0, 0.0}) coeff.pop_back();
  coeff[0] = coeff[0].real();
  data->weights = std::move(coeff);
  return data;
}

double eval_mollified(const MollifiedData& data, int k, double x) {
  const auto& w = data.weights;
  const double k1 = 2.0 * M_PI / data.period;
  double acc = k == 0 ? w[0].real() : 0.0;
  const Complex e1 = std::polar(1.0, k1 * x);
  Complex e = e1;
  // (i kappa)^k = kappa^k i^k.
  static const Complex ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const Complex ik = ipow[k % 4];
  for (std::size_t m = 1; m < w.size(); ++m) {
    if ((m & 63u) == 0) e = std::polar(1.0, k1 * x * static_cast<double>(m));
    const double kappa = k1 * static_cast<double>(m);
    acc += 2.0 * (w[m] * ik * e).real() * std::pow(kappa, k);
    e *= e1;
  }
  return acc;
}

}  // namespace detail

}  // namespace hyps
