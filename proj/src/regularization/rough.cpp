#include <algorithm>
#include <cmath>

#include "hyps/error.hpp"
#include "hyps/rough.hpp"

namespace hyps {

namespace {

void check_points(const std::vector<double>& pts, const std::vector<double>& vals, double period) {
  if (!(period > 0.0)) throw Error(ErrorKind::kInvalidArgument, "rough period must be > 0");
  if (pts.empty()) throw Error(ErrorKind::kInvalidArgument, "rough coefficient needs points");
  if (pts.size() != vals.size()) {
    throw Error(ErrorKind::kInvalidArgument, "points and values differ in length");
  }
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (!(pts[i] > pts[i - 1])) {
      throw Error(ErrorKind::kInvalidArgument, "points must be strictly increasing");
    }
  }
  if (!(pts.back() < pts.front() + period)) {
    throw Error(ErrorKind::kInvalidArgument, "points must span less than one period");
  }
  for (double v : vals) {
    if (!std::isfinite(v)) throw Error(ErrorKind::kNonFinite, "rough value is not finite");
  }
}

}  // namespace

RoughCoefficient::RoughCoefficient(Kind kind, std::vector<double> points,
                                   std::vector<double> values, double period, int axis)
    : kind_(kind), points_(std::move(points)), values_(std::move(values)), period_(period),
      axis_(axis) {
  if (axis < 0 || axis > 1) throw Error(ErrorKind::kInvalidArgument, "axis must be 0 or 1");
  check_points(points_, values_, period_);
}

RoughCoefficient RoughCoefficient::piecewise_constant(std::vector<double> breakpoints,
                                                      std::vector<double> values, double period,
                                                      int axis) {
  return {Kind::kPiecewiseConstant, std::move(breakpoints), std::move(values), period, axis};
}

RoughCoefficient RoughCoefficient::piecewise_linear(std::vector<double> nodes,
                                                    std::vector<double> values, double period,
                                                    int axis) {
  return {Kind::kPiecewiseLinear, std::move(nodes), std::move(values), period, axis};
}

RoughCoefficient RoughCoefficient::table(std::vector<double> cell_values, double period,
                                         int axis) {
  if (cell_values.empty()) throw Error(ErrorKind::kInvalidArgument, "empty table");
  std::vector<double> pts(cell_values.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    pts[i] = period * static_cast<double>(i) / static_cast<double>(pts.size());
  }
  return {Kind::kTable, std::move(pts), std::move(cell_values), period, axis};
}

double RoughCoefficient::operator()(double x) const {
  const double x0 = points_.front();
  double y = std::fmod(x - x0, period_);
  if (y < 0.0) y += period_;
  y += x0;
  const std::size_t n = points_.size();
  // Index of the last point <= y.
  const auto it = std::upper_bound(points_.begin(), points_.end(), y);
  const std::size_t i = static_cast<std::size_t>(it - points_.begin()) - 1;
  if (kind_ != Kind::kPiecewiseLinear) return values_[i];
  const std::size_t j = (i + 1) % n;
  const double a = points_[i];
  const double b = j == 0 ? points_[0] + period_ : points_[j];
  const double s = (y - a) / (b - a);
  return values_[i] + s * (values_[j] - values_[i]);
}

double RoughCoefficient::sup_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double RoughCoefficient::max_jump() const {
  if (kind_ == Kind::kPiecewiseLinear) return 0.0;
  double m = 0.0;
  const std::size_t n = values_.size();
  for (std::size_t i = 0; i < n; ++i) {
    m = std::max(m, std::abs(values_[i] - values_[(i + n - 1) % n]));
  }
  return m;
}

std::complex<double> RoughCoefficient::fourier_coefficient(int m) const {
  using C = std::complex<double>;
  const std::size_t n = points_.size();
  const double kappa = 2.0 * M_PI * m / period_;
  C acc{0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = (i + 1) % n;
    const double a = points_[i];
    const double b = j == 0 ? points_[0] + period_ : points_[j];
    if (m == 0) {
      const double vb = kind_ == Kind::kPiecewiseLinear ? values_[j] : values_[i];
      acc += 0.5 * (values_[i] + vb) * (b - a);
      continue;
    }
    const C ea = std::exp(C(0.0, -kappa * a));
    const C eb = std::exp(C(0.0, -kappa * b));
    if (kind_ == Kind::kPiecewiseLinear) {
      // Antiderivative of f(y) e^{-i kappa y}: f E i/kappa + s E / kappa^2.
      const double s = (values_[j] - values_[i]) / (b - a);
      const C I(0.0, 1.0);
      auto prim = [&](double f, C e) { return f * e * I / kappa + s * e / (kappa * kappa); };
      acc += prim(values_[j], eb) - prim(values_[i], ea);
    } else {
      acc += values_[i] * (ea - eb) / C(0.0, kappa);
    }
  }
  return acc / period_;
}

std::string RoughCoefficient::kind_name() const {
  switch (kind_) {
    case Kind::kPiecewiseConstant: return "piecewise_constant";
    case Kind::kPiecewiseLinear: return "piecewise_linear";
    case Kind::kTable: return "table";
  }
  return "unknown";
}

}  // namespace hyps
