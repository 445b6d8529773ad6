#include <cmath>
#include <vector>

#include "hyps/symbols.hpp"

namespace hyps {

namespace {

// Truncated Taylor series in h around a fixed point; c[k] is the coefficient
// of h^k.
using Jet = std::vector<double>;

Jet jet_mul(const Jet& a, const Jet& b) {
  Jet r(a.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; i + j < a.size(); ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

Jet jet_inv(const Jet& a) {
  Jet r(a.size(), 0.0);
  r[0] = 1.0 / a[0];
  for (std::size_t k = 1; k < a.size(); ++k) {
    double s = 0.0;
    for (std::size_t j = 1; j <= k; ++j) s += a[j] * r[k - j];
    r[k] = -s / a[0];
  }
  return r;
}

Jet jet_exp(const Jet& a) {
  Jet r(a.size(), 0.0);
  r[0] = std::exp(a[0]);
  for (std::size_t k = 1; k < a.size(); ++k) {
    double s = 0.0;
    for (std::size_t j = 1; j <= k; ++j) s += static_cast<double>(j) * a[j] * r[k - j];
    r[k] = s / static_cast<double>(k);
  }
  return r;
}

double kth_derivative(const Jet& j, int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return j[k] * f;
}

// 1/s - 1/(1-s) expanded at s.
Jet step_exponent(double s, int k) {
  Jet a(k + 1, 0.0), b(k + 1, 0.0);
  a[0] = s;
  b[0] = 1.0 - s;
  if (k >= 1) {
    a[1] = 1.0;
    b[1] = -1.0;
  }
  Jet ia = jet_inv(a), ib = jet_inv(b);
  for (int i = 0; i <= k; ++i) ia[i] -= ib[i];
  return ia;
}

}  // namespace

double bump_derivative(double s, int k) {
  if (k < 0) throw Error(ErrorKind::kInvalidArgument, "negative profile derivative");
  const double u = 1.0 - s * s;
  if (u <= 1.0 / 700.0) return 0.0;
  if (k == 0) return std::exp(1.0 - 1.0 / u);
  Jet q(k + 1, 0.0);
  q[0] = u;
  q[1] = -2.0 * s;
  if (k >= 2) q[2] = -1.0;
  Jet e = jet_inv(q);
  for (auto& c : e) c = -c;
  e[0] += 1.0;
  return kth_derivative(jet_exp(e), k);
}

double step_derivative(double s, int k) {
  if (k < 0) throw Error(ErrorKind::kInvalidArgument, "negative profile derivative");
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return k == 0 ? 1.0 : 0.0;
  // S = 1 / (1 + exp(g)), g = 1/s - 1/(1-s).
  const double g = 1.0 / s - 1.0 / (1.0 - s);
  if (g > 700.0) return 0.0;
  if (g < -700.0) return k == 0 ? 1.0 : 0.0;
  if (k == 0) return 1.0 / (1.0 + std::exp(g));
  Jet gj = step_exponent(s, k);
  if (g > 0.0) {
    // S = R / (1 + R) with R = exp(-g) keeps every coefficient bounded.
    for (auto& c : gj) c = -c;
    Jet r = jet_exp(gj);
    Jet den = r;
    den[0] += 1.0;
    return kth_derivative(jet_mul(r, jet_inv(den)), k);
  }
  Jet e = jet_exp(gj);
  e[0] += 1.0;
  return kth_derivative(jet_inv(e), k);
}

}  // namespace hyps
