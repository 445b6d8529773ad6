#pragma once

#include <array>
#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hyps/error.hpp"
#include "hyps/rough.hpp"

namespace hyps {

using Complex = std::complex<double>;

// Multi-indices carry two slots; only the first `dim` are meaningful.
using MultiIndex = std::array<int, 2>;

inline int order_of(const MultiIndex& a) { return a[0] + a[1]; }

struct SymbolPoint {
  double t = 0.0;
  std::array<double, 2> x{};
  std::array<double, 2> xi{};
};

enum class NodeKind {
  kConstant,
  kCoordX,
  kCoordXi,
  kCoordT,
  kSum,
  kProduct,
  kPower,
  kSin,
  kCos,
  kSmoothBump,
  kSmoothStep,
  kJapaneseBracket,
  kMollifiedInX,
  kRough,
};

// Fourier representation of a periodic coefficient after multiplication of
// its spectrum by psi(|kappa| / omega).  weights[m] is the damped coefficient
// of exp(i kappa_m x), m >= 0; negative modes are conjugates.
struct MollifiedData {
  int axis = 0;
  double period = 0.0;
  double omega = 1.0;
  double transition_width = 1.0;
  std::vector<Complex> weights;
};

class Expr;

namespace detail {
struct Node;
}

// Immutable expression tree for a(t, x, xi) with exact differentiation.
class Expr {
 public:
  Expr();  // constant zero

  static Expr constant(Complex c);
  static Expr x(int axis);
  static Expr xi(int axis);
  static Expr t();
  static Expr sum(std::vector<Expr> terms);
  static Expr product(std::vector<Expr> factors);
  static Expr power(const Expr& base, int exponent);
  static Expr sin(const Expr& arg);
  static Expr cos(const Expr& arg);
  // B((arg - center) / width), B(s) = exp(1 - 1/(1 - s^2)) on |s| < 1.
  static Expr smooth_bump(const Expr& arg, double center, double width, int deriv = 0);
  // S((arg - edge) / width), S rising from 0 at s <= 0 to 1 at s >= 1.
  static Expr smooth_step(const Expr& arg, double edge, double width, int deriv = 0);
  // <xi>^order over all `dim` frequency axes.
  static Expr japanese_bracket(double order, int dim);
  // Periodic smoothing of `source` along `axis`; `source` must depend on x
  // only through that axis.
  static Expr mollified_in_x(const Expr& source, double omega, double period, int axis,
                             double transition_width = 1.0);
  static Expr rough(std::shared_ptr<const RoughCoefficient> coefficient);

  NodeKind kind() const;
  bool is_constant() const;
  bool is_zero() const;
  Complex constant_value() const;  // valid when is_constant()

  bool depends_on_t() const;
  bool depends_on_x(int axis) const;
  bool depends_on_xi(int axis) const;
  bool depends_on_any_x() const;
  bool depends_on_any_xi() const;

  Complex eval(const SymbolPoint& p) const;

  Expr diff_t() const;
  Expr diff_x(int axis) const;
  Expr diff_xi(int axis) const;
  Expr derivative(int d, const MultiIndex& alpha, const MultiIndex& beta) const;

  // Structural access for serialization and separable decomposition.
  const std::vector<Expr>& children() const;
  int axis() const;
  int exponent() const;
  int deriv_order() const;
  double param0() const;
  double param1() const;
  int bracket_dim() const;
  const Expr& source() const;  // original child of a mollified node
  const std::shared_ptr<const MollifiedData>& mollified() const;
  const std::shared_ptr<const RoughCoefficient>& rough_coefficient() const;

  std::string to_string() const;

  Expr operator-() const;
  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);

  const detail::Node* node() const { return node_.get(); }

 private:
  explicit Expr(std::shared_ptr<const detail::Node> node);
  std::shared_ptr<const detail::Node> node_;
  friend struct detail::Node;
  friend class ExprBuilder;
};

Expr operator*(Complex c, const Expr& e);

// Expression with the order it claims to have and its spatial dimension.
struct SymbolExpr {
  Expr expr;
  double declared_order = 0.0;
  int dim = 1;
};

constexpr int kDefaultMaxDerivativeOrder = 6;

// d^d_t d^alpha_xi d^beta_x of s at (t, x, xi).
Complex eval_symbol(const SymbolExpr& s, double t, const std::array<double, 2>& x,
                    const std::array<double, 2>& xi, int d, const MultiIndex& alpha,
                    const MultiIndex& beta, int max_order = kDefaultMaxDerivativeOrder);

struct HyperbolicSymbol {
  SymbolExpr a1;  // real valued, order 1
  SymbolExpr a0;  // order 0
  std::optional<double> x_independent_outside;

  int dim() const { return a1.dim; }
  SymbolExpr full() const { return {a1.expr + a0.expr, 1.0, a1.dim}; }
};

// Sample sets used for every sampled supremum.  Coordinates are placed on
// fixed lattices (lo + j * step) so a larger box or a finer step only adds
// points.
struct SamplingBox {
  int dim = 1;
  std::array<double, 2> x_lo{0.0, 0.0};
  std::array<double, 2> x_hi{0.0, 0.0};
  double x_step = 0.0;
  double xi_max = 1024.0;
  double xi_step = 32.0;
  double t_end = 1.0;
  int t_samples = 33;

  static SamplingBox for_domain(int dim, double length, int x_points = 64,
                                double xi_max = 1024.0, double t_end = 1.0);

  std::vector<double> x_samples(int axis) const;
  std::vector<std::array<double, 2>> x_points() const;
  std::vector<std::array<double, 2>> xi_points() const;
  std::vector<double> t_points() const;
  void validate() const;
};

double seminorm_c(const SymbolExpr& s, double m, const MultiIndex& alpha, const MultiIndex& beta,
                  const SamplingBox& box, double t = 0.0);
double seminorm_q(const SymbolExpr& s, double m, int k, int l, const SamplingBox& box,
                  double t = 0.0);
double seminorm_Q(const SymbolExpr& s, double m, int j, int k, int l, const SamplingBox& box);

// Family of symbols indexed by eps.
struct GenSymbolFamily {
  std::function<HyperbolicSymbol(double)> base;
  std::vector<double> eps_grid;
  std::optional<int> mollification_k;

  static std::vector<double> geometric_grid(double eps0, double ratio, int count);
  // Geometric grid with `count` points from eps_max down to eps_min.
  static std::vector<double> log_grid(double eps_max, double eps_min, int count);
};

enum class SymbolPart { kA1, kA0, kFull };

struct EpsSeries {
  std::vector<double> eps;
  std::vector<double> values;
};

// Q^m_{j,k,l} of the chosen part for every eps of the family.
EpsSeries seminorm_series(const GenSymbolFamily& fam, SymbolPart part, double m, int j, int k,
                          int l, const SamplingBox& box);

struct LogTypeVerdict {
  bool is_log_type = false;
  double fitted_coeff = 0.0;
  double intercept = 0.0;
  double residual = 0.0;
};

struct SlowScaleVerdict {
  bool is_slow_scale = false;
  int largest_p = 0;
};

struct AsymptoticThresholds {
  double log_type_residual = 0.15;
  int p_max = 8;
  int min_points = 5;
  double min_decades = 3.0;
};

void require_sweep(const std::vector<double>& eps, const AsymptoticThresholds& th);

LogTypeVerdict classify_log_type(const EpsSeries& series, const AsymptoticThresholds& th = {});
LogTypeVerdict classify_log_type(const GenSymbolFamily& fam, SymbolPart part, double m, int k,
                                 int l, const SamplingBox& box,
                                 const AsymptoticThresholds& th = {});
SlowScaleVerdict classify_slow_scale(const EpsSeries& series, const AsymptoticThresholds& th = {});
SlowScaleVerdict classify_slow_scale(const GenSymbolFamily& fam, SymbolPart part, int j, int k,
                                     int l, const SamplingBox& box,
                                     const AsymptoticThresholds& th = {});

// Univariate profile derivatives.
double bump_derivative(double s, int k);
double step_derivative(double s, int k);

// JSON expression schema (see docs/symbol-grammar.md).
Expr expr_from_json_text(const std::string& text);
std::string expr_to_json_text(const Expr& e);

}  // namespace hyps
