#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hyps/grid.hpp"
#include "hyps/symbols.hpp"

namespace hyps {

struct QuantizeOptions {
  // Apply P op(s) P with P the projection onto |mode| <= M/4 per axis.
  bool band_projected = false;
  std::size_t max_separable_terms = 64;
};

// Kohn-Nirenberg quantization of a symbol on a fixed grid.  Sampled factors
// of t-independent parts are cached, so one instance should be reused across
// many applications.
class Quantized {
 public:
  Quantized(const SymbolExpr& s, const Grid& g, QuantizeOptions opt = {});
  ~Quantized();
  Quantized(Quantized&&) noexcept;
  Quantized& operator=(Quantized&&) noexcept;

  const Grid& grid() const;
  bool band_projected() const;
  std::size_t separable_terms() const;
  std::size_t mixed_terms() const;

  GridFunction apply(double t, const GridFunction& u) const;
  GridFunction apply_adjoint(double t, const GridFunction& u) const;
  // out may not alias in.
  void apply(double t, const Complex* in, Complex* out) const;
  void apply_adjoint(double t, const Complex* in, Complex* out) const;

  // max |s(t, x_j, xi_k)| over grid nodes and the generator's frequencies
  // (in-band ones when band projected).  Exact when M^(2n) <= 2^20, a
  // separable upper bound otherwise.
  double symbol_sup(double t) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

GridFunction apply_op(const SymbolExpr& s, double t, const GridFunction& u);
GridFunction apply_adjoint_op(const SymbolExpr& s, double t, const GridFunction& u);

// Matrix of apply_op in the nodal basis; M^n <= 4096.
Eigen::MatrixXcd op_matrix(const SymbolExpr& s, double t, const Grid& g);

enum class NormMethod { kPower, kDense, kAuto };

struct NormOptions {
  int iters = 50;
  double tol = 1e-6;
  std::uint64_t seed = 12345;
  NormMethod method = NormMethod::kPower;
  bool band_projected = true;
  // kAuto uses the dense path up to this many (band) modes.
  std::size_t dense_limit = 1024;
};

struct NormResult {
  double value = 0.0;
  bool converged = true;
  int iterations = 0;
  std::string method;
};

using LinearMap = std::function<void(const Complex* in, Complex* out)>;

// ||B|| for B acting on grid functions; `adjoint` is B^dagger.  With
// band_projected the input space is the band subspace and the output is
// projected onto it.
NormResult linear_operator_norm(const Grid& g, const LinearMap& op, const LinearMap& adjoint,
                                const NormOptions& opt);

// ||op(s) - op(s)^dagger||.
NormResult adjoint_defect_norm(const SymbolExpr& s, double t, const Grid& g,
                               const NormOptions& opt = {});
NormResult adjoint_defect_norm(const Quantized& q, double t, const NormOptions& opt = {});

struct OperatorNormReport {
  NormResult norm;
  double seminorm_bound = 0.0;  // Q^0_{0, n/2+1, n/2+1}(s)
};

NormResult operator_norm_only(const Quantized& q, double t, const NormOptions& opt = {});
OperatorNormReport operator_norm(const SymbolExpr& s, double t, const Grid& g,
                                 const NormOptions& opt = {});
OperatorNormReport operator_norm(const SymbolExpr& s, double t, const Grid& g,
                                 const NormOptions& opt, const SamplingBox& box);

struct OscIntConfig {
  int lambda = 1;
  int l_order = 1;
  int theta_nodes = 6;
  double y_half = 8.0;
  double eta_half = 64.0;
  double density = 1.0;
  int panel_nodes = 10;
  double tail_tol = 5e-2;
  // Skip the separable fast path and sum the full tensor quadrature.
  bool direct = false;

  void validate(int dim, int max_alpha) const;
};

struct RemainderValue {
  Complex value{0.0, 0.0};
  double tail_bound = 0.0;
};

// a*(t,x,xi) - conj(a(t,x,xi)) = -i int_0^1 r_theta dtheta through the
// regularized oscillatory integral, with optional extra derivatives.
RemainderValue adjoint_symbol_remainder(const SymbolExpr& s, double t,
                                        const std::array<double, 2>& x,
                                        const std::array<double, 2>& xi, const OscIntConfig& cfg,
                                        const MultiIndex& alpha = {0, 0},
                                        const MultiIndex& beta = {0, 0});

// r_theta at every theta node and every (x_i, xi_k); result[theta][k][i].
// Also returns the theta nodes and weights on [0, 1].
struct RemainderTable {
  std::vector<double> theta;
  std::vector<double> theta_weights;
  std::vector<std::vector<std::vector<Complex>>> r;
  double tail_bound = 0.0;
};

RemainderTable remainder_theta_table(const SymbolExpr& s, double t, const std::vector<double>& xs,
                                     const std::vector<double>& xis, const OscIntConfig& cfg,
                                     const MultiIndex& alpha = {0, 0},
                                     const MultiIndex& beta = {0, 0});

struct RemainderEstimate {
  double lhs = 0.0;
  double rhs_seminorm = 0.0;
  double ratio = 0.0;
  double tail_bound = 0.0;
};

// lhs uses the box's x lattice and the radial xi ladder {0, +-2^j, +-xi_max}.
RemainderEstimate check_remainder_estimate(const SymbolExpr& s, const MultiIndex& alpha,
                                           const MultiIndex& beta, const OscIntConfig& cfg,
                                           const SamplingBox& box, double t = 0.0);

}  // namespace hyps
