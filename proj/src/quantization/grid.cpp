#include <algorithm>
#include <cmath>

#include "hyps/grid.hpp"
#include "quantization/fft.hpp"

namespace hyps {

double Grid::frequency(int k) const { return 2.0 * M_PI * mode(k) / L; }

std::array<double, 2> Grid::point(std::size_t idx) const {
  if (dim == 1) return {node(static_cast<int>(idx)), 0.0};
  return {node(static_cast<int>(idx / M)), node(static_cast<int>(idx % M))};
}

std::array<double, 2> Grid::frequency_point(std::size_t idx) const {
  if (dim == 1) return {frequency(static_cast<int>(idx)), 0.0};
  return {frequency(static_cast<int>(idx / M)), frequency(static_cast<int>(idx % M))};
}

bool Grid::in_band(std::size_t idx) const {
  const int b = band_limit();
  if (dim == 1) return std::abs(mode(static_cast<int>(idx))) <= b;
  return std::abs(mode(static_cast<int>(idx / M))) <= b &&
         std::abs(mode(static_cast<int>(idx % M))) <= b;
}

bool Grid::is_nyquist(std::size_t idx) const {
  if (dim == 1) return static_cast<int>(idx) == M / 2;
  return static_cast<int>(idx / M) == M / 2 || static_cast<int>(idx % M) == M / 2;
}

void Grid::validate() const {
  if (dim < 1 || dim > 2) throw Error(ErrorKind::kDimensionMismatch, "grid dim must be 1 or 2");
  if (M < 4 || (M & (M - 1)) != 0) {
    throw Error(ErrorKind::kInvalidArgument, "grid M must be a power of 2 and >= 4");
  }
  if (!(L > 0.0) || !std::isfinite(L)) throw Error(ErrorKind::kInvalidArgument, "grid L must be > 0");
}

GridFunction GridFunction::zeros(const Grid& g) {
  g.validate();
  return {g, std::vector<Complex>(g.size(), Complex{0.0, 0.0})};
}

GridFunction GridFunction::sample(const Grid& g,
                                  const std::function<Complex(const std::array<double, 2>&)>& f) {
  GridFunction u = zeros(g);
  for (std::size_t i = 0; i < u.values.size(); ++i) u.values[i] = f(g.point(i));
  return u;
}

double GridFunction::norm_sq() const {
  double s = 0.0;
  for (const auto& v : values) s += std::norm(v);
  return s * std::pow(grid.dx(), grid.dim);
}

double GridFunction::norm() const { return std::sqrt(norm_sq()); }

double GridFunction::max_abs() const {
  double m = 0.0;
  for (const auto& v : values) m = std::max(m, std::abs(v));
  return m;
}

void GridFunction::check_finite() const {
  for (const auto& v : values) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw Error(ErrorKind::kNonFinite, "grid function has non-finite values");
    }
  }
}

double max_abs_diff(const GridFunction& a, const GridFunction& b) {
  if (a.grid != b.grid) throw Error(ErrorKind::kGridMismatch, "grids differ");
  double m = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
  return m;
}

Complex inner(const GridFunction& a, const GridFunction& b) {
  if (a.grid != b.grid) throw Error(ErrorKind::kGridMismatch, "grids differ");
  Complex s{0.0, 0.0};
  for (std::size_t i = 0; i < a.values.size(); ++i) s += a.values[i] * std::conj(b.values[i]);
  return s * std::pow(a.grid.dx(), a.grid.dim);
}

std::vector<Complex> fourier_coefficients(const GridFunction& u) {
  u.grid.validate();
  std::vector<Complex> c(u.values.size());
  fft::Plan::get(u.grid.dim, u.grid.M)->forward(u.values.data(), c.data());
  const double s = 1.0 / static_cast<double>(u.values.size());
  for (auto& v : c) v *= s;
  return c;
}

GridFunction from_fourier(const Grid& g, const std::vector<Complex>& c) {
  GridFunction u = GridFunction::zeros(g);
  if (c.size() != u.values.size()) throw Error(ErrorKind::kGridMismatch, "coefficient count");
  fft::Plan::get(g.dim, g.M)->backward(c.data(), u.values.data());
  return u;
}

GridFunction spectral_derivative(const GridFunction& u, const std::array<int, 2>& beta) {
  const Grid& g = u.grid;
  if (g.dim == 1 && beta[1] != 0) throw Error(ErrorKind::kDimensionMismatch, "beta");
  if (beta[0] == 0 && beta[1] == 0) return u;
  auto c = fourier_coefficients(u);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto f = g.frequency_point(i);
    Complex m{1.0, 0.0};
    for (int a = 0; a < g.dim; ++a) {
      const int idx = g.dim == 1 ? static_cast<int>(i) : static_cast<int>(a == 0 ? i / g.M : i % g.M);
      // The unpaired Nyquist mode has no real derivative; drop it for odd orders.
      if (idx == g.M / 2 && beta[a] % 2 == 1) {
        m = 0.0;
        break;
      }
      m *= std::pow(Complex(0.0, f[a]), beta[a]);
    }
    c[i] *= m;
  }
  return from_fourier(g, c);
}

GridFunction band_project(const GridFunction& u) {
  auto c = fourier_coefficients(u);
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (!u.grid.in_band(i)) c[i] = 0.0;
  }
  return from_fourier(u.grid, c);
}

}  // namespace hyps
