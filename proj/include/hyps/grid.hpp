#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "hyps/error.hpp"

namespace hyps {

using Complex = std::complex<double>;

// Periodic grid on [0, L)^dim with M points per axis.  Nodal index for dim 2
// is j0 * M + j1.  Frequency index k maps to the integer mode k for k < M/2
// and k - M otherwise, so the unpaired Nyquist mode is -M/2.
struct Grid {
  int dim = 1;
  int M = 64;
  double L = 6.283185307179586;

  double dx() const { return L / M; }
  std::size_t size() const { return dim == 1 ? static_cast<std::size_t>(M) :
                                               static_cast<std::size_t>(M) * M; }
  int mode(int k) const { return k < M / 2 ? k : k - M; }
  double frequency(int k) const;
  double node(int j) const { return j * dx(); }
  std::array<double, 2> point(std::size_t idx) const;
  std::array<double, 2> frequency_point(std::size_t idx) const;
  // Largest |mode| kept by the band projection (M/4).
  int band_limit() const { return M / 4; }
  bool in_band(std::size_t idx) const;
  bool is_nyquist(std::size_t idx) const;
  void validate() const;

  bool operator==(const Grid& o) const { return dim == o.dim && M == o.M && L == o.L; }
  bool operator!=(const Grid& o) const { return !(*this == o); }
};

struct GridFunction {
  Grid grid;
  std::vector<Complex> values;

  static GridFunction zeros(const Grid& g);
  static GridFunction sample(const Grid& g,
                             const std::function<Complex(const std::array<double, 2>&)>& f);

  double norm_sq() const;
  double norm() const;
  double max_abs() const;
  void check_finite() const;
};

double max_abs_diff(const GridFunction& a, const GridFunction& b);
Complex inner(const GridFunction& a, const GridFunction& b);  // sum a conj(b) dx^n

// Fourier coefficients c_k = (1/M^n) sum_j u_j exp(-i xi_k x_j).
std::vector<Complex> fourier_coefficients(const GridFunction& u);
// Inverse: u_j = sum_k c_k exp(i xi_k x_j).
GridFunction from_fourier(const Grid& g, const std::vector<Complex>& c);

// Spectral partial derivative d^beta_x.
GridFunction spectral_derivative(const GridFunction& u, const std::array<int, 2>& beta);
// Orthogonal projection onto |mode| <= band_limit on every axis.
GridFunction band_project(const GridFunction& u);

}  // namespace hyps
