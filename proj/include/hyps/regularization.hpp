#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "hyps/grid.hpp"
#include "hyps/rough.hpp"
#include "hyps/symbols.hpp"

namespace hyps {

// psi(r) = 1 - S((r - 1) / width): equal to 1 on r <= 1, 0 on r >= 1 + width.
double mollifier_profile(double r, double width = 1.0);

struct Mollifier {
  int dim = 1;
  double transition_width = 1.0;

  double fourier_profile(double r) const { return mollifier_profile(r, transition_width); }
  // rho(x), the inverse transform of the radial profile.
  double kernel(const std::array<double, 2>& x) const;
};

struct ScaledMollifier {
  Mollifier base;
  double omega = 1.0;

  double fourier_profile(double r) const { return base.fourier_profile(r / omega); }
  double kernel(const std::array<double, 2>& y) const;  // omega^n rho(omega y)
};

// (log 1/eps)^(1/k).
double omega_of_eps(double eps, int k = 1);

// w * rho_eps computed spectrally: coefficients multiplied by psi(eps |xi|).
GridFunction embed_data(const GridFunction& w, double eps, const Grid& target,
                        const Mollifier& moll = {});
GridFunction embed_data(const std::function<Complex(const std::array<double, 2>&)>& w,
                        double eps, const Grid& target, const Mollifier& moll = {});

// Coefficient entering a first-order symbol; either a smooth x-only
// expression or a rough periodic coefficient.
struct CoefficientSpec {
  std::variant<Expr, std::shared_ptr<const RoughCoefficient>> value;

  bool is_rough() const { return value.index() == 1; }
  static CoefficientSpec smooth(Expr e) { return {std::move(e)}; }
  static CoefficientSpec rough(RoughCoefficient c) {
    return {std::make_shared<const RoughCoefficient>(std::move(c))};
  }
};

// a(x, xi) = sum_j c_j(x) xi_j + scale * b(x).
struct RoughSymbolSpec {
  int dim = 1;
  double period = 6.283185307179586;
  std::vector<CoefficientSpec> speeds;
  std::optional<CoefficientSpec> lower;
  Complex lower_scale{1.0, 0.0};
  double transition_width = 1.0;
};

HyperbolicSymbol regularize_symbol(const RoughSymbolSpec& spec, int k, double eps);
GenSymbolFamily regularized_family(const RoughSymbolSpec& spec, int k, std::vector<double> eps_grid);

struct RegularizationLogTypeReport {
  std::vector<int> orders;
  std::vector<LogTypeVerdict> verdicts;
  std::vector<EpsSeries> series;
  bool all_log_type = false;
};

RegularizationLogTypeReport verify_log_type_of_regularization(const RoughSymbolSpec& spec, int k,
                                                              const std::vector<double>& eps_grid,
                                                              const SamplingBox& box,
                                                              const AsymptoticThresholds& th = {});

}  // namespace hyps
