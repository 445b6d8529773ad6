#include <algorithm>
#include <cmath>

#include "hyps/asymptotics.hpp"

namespace hyps {

std::vector<DerivativeOrder> orders_up_to(int dim, int cap, int max_d) {
  std::vector<DerivativeOrder> out;
  for (int total = 0; total <= cap; ++total) {
    for (int d = 0; d <= std::min(total, max_d); ++d) {
      const int a = total - d;
      if (dim == 1) {
        out.push_back({d, {a, 0}});
      } else {
        for (int a0 = a; a0 >= 0; --a0) out.push_back({d, {a0, a - a0}});
      }
    }
  }
  return out;
}

ExponentFit fit_exponent(const std::vector<double>& eps, const std::vector<double>& log_values) {
  if (eps.size() != log_values.size() || eps.size() < 2) {
    throw Error(ErrorKind::kInsufficientSweep, "exponent fit needs >= 2 points");
  }
  const std::size_t n = eps.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(1.0 / eps[i]);
    my += log_values[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(1.0 / eps[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (log_values[i] - my);
  }
  if (sxx == 0.0) throw Error(ErrorKind::kInsufficientSweep, "eps values coincide");
  ExponentFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double rss = 0.0, tss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = log_values[i] - (f.slope * std::log(1.0 / eps[i]) + f.intercept);
    rss += r * r;
    tss += log_values[i] * log_values[i];
  }
  f.se = n > 2 ? std::sqrt(rss / (n - 2) / sxx) : 0.0;
  f.residual = tss > 0.0 ? std::sqrt(rss / tss) : std::sqrt(rss);
  return f;
}

NegligibleVerdict check_negligible(const SweepReport& report, int q_max) {
  NegligibleVerdict v;
  std::size_t k00 = report.orders.size();
  for (std::size_t i = 0; i < report.orders.size(); ++i) {
    if (report.orders[i] == DerivativeOrder{0, {0, 0}}) k00 = i;
  }
  if (k00 == report.orders.size()) {
    throw Error(ErrorKind::kInsufficientOrders, "negligibility needs the (0, 0) order");
  }
  if (!report.complete) throw Error(ErrorKind::kInsufficientSweep, "sweep has failed rows");
  // Decreasing eps.
  std::vector<std::size_t> idx(report.rows.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return report.rows[a].eps > report.rows[b].eps; });
  for (auto i : idx) {
    v.eps.push_back(report.rows[i].eps);
    v.log_max_u.push_back(report.rows[i].log_norms[k00]);
  }
  const std::size_t n = v.eps.size();
  if (n < 3) throw Error(ErrorKind::kInsufficientSweep, "negligibility needs >= 3 eps points");
  const std::size_t tail = std::max<std::size_t>(3, (n + 1) / 2);
  v.negligible = true;
  for (int q = 1; q <= q_max; ++q) {
    bool pass = true;
    for (std::size_t i = n - tail + 1; i < n; ++i) {
      const double prev = v.log_max_u[i - 1] - q * std::log(v.eps[i - 1]);
      const double cur = v.log_max_u[i] - q * std::log(v.eps[i]);
      if (std::isinf(cur) && cur < 0.0) continue;  // exact zero
      if (cur > prev + 1e-9 * (1.0 + std::abs(prev))) pass = false;
    }
    if (!pass) {
      v.negligible = false;
      v.failed_q = q;
      break;
    }
    v.max_q = q;
  }
  return v;
}

}  // namespace hyps
