#pragma once

#include <complex>
#include <string>
#include <vector>

namespace hyps {

// A bounded, periodic, non-smooth coefficient c(x) along one axis of the
// torus [0, period).  Stored analytically so that its mollification can be
// expressed through exact Fourier coefficients.
class RoughCoefficient {
 public:
  enum class Kind { kPiecewiseConstant, kPiecewiseLinear, kTable };

  // Values v_i hold on [b_i, b_{i+1}); the last piece wraps to b_0 + period.
  static RoughCoefficient piecewise_constant(std::vector<double> breakpoints,
                                             std::vector<double> values, double period,
                                             int axis = 0);
  // Periodic linear interpolation through (node_i, value_i).
  static RoughCoefficient piecewise_linear(std::vector<double> nodes, std::vector<double> values,
                                           double period, int axis = 0);
  // Cell averages on a uniform partition of [0, period).
  static RoughCoefficient table(std::vector<double> cell_values, double period, int axis = 0);

  Kind kind() const { return kind_; }
  int axis() const { return axis_; }
  double period() const { return period_; }
  const std::vector<double>& points() const { return points_; }
  const std::vector<double>& values() const { return values_; }

  double operator()(double x) const;
  double sup_abs() const;
  // Largest absolute jump across a breakpoint (0 for continuous kinds).
  double max_jump() const;

  // Exact Fourier coefficient (1/P) * int_0^P c(y) exp(-i kappa_m y) dy,
  // kappa_m = 2 pi m / P.
  std::complex<double> fourier_coefficient(int m) const;

  std::string kind_name() const;

 private:
  RoughCoefficient(Kind kind, std::vector<double> points, std::vector<double> values,
                   double period, int axis);

  Kind kind_;
  std::vector<double> points_;
  std::vector<double> values_;
  double period_;
  int axis_;
};

}  // namespace hyps
