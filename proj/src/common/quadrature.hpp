#pragma once

#include <cmath>
#include <utility>
#include <vector>

namespace hyps::quad {

struct Rule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

// Gauss-Legendre rule by Newton iteration on P_n.
inline Rule gauss_legendre(int n) {
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    r.nodes[i] = -z;
    r.nodes[n - 1 - i] = z;
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  return r;
}

// Composite rule on [a, b] with `panels` equal panels.
inline std::vector<std::pair<double, double>> composite(double a, double b, int panels,
                                                        const Rule& r) {
  std::vector<std::pair<double, double>> out;
  out.reserve(static_cast<std::size_t>(panels) * r.nodes.size());
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
      out.emplace_back(lo + 0.5 * h * (r.nodes[i] + 1.0), 0.5 * h * r.weights[i]);
    }
  }
  return out;
}

}  // namespace hyps::quad
