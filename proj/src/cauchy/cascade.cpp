#include <algorithm>
#include <cmath>

#include "hyps/cauchy.hpp"

namespace hyps {

namespace {

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TimeDerivatives::TimeDerivatives(const CauchyProblem& p, int max_d, bool band_projected)
    : p_(&p), band_(band_projected) {
  QuantizeOptions qo;
  qo.band_projected = band_projected;
  const SymbolExpr full = p.symbol.full();
  Expr e = full.expr;
  for (int i = 0; i <= std::max(0, max_d - 1); ++i) {
    if (i > 0) e = e.diff_t();
    ops_.emplace_back(SymbolExpr{e, full.declared_order, full.dim}, p.grid(), qo);
  }
}

std::vector<GridFunction> TimeDerivatives::eval(double t, const GridFunction& u, int d) const {
  if (d > static_cast<int>(ops_.size())) {
    throw Error(ErrorKind::kUnsupportedDerivativeOrder, "t-derivative order above the prepared maximum");
  }
  const Grid& g = p_->grid();
  const std::size_t n = g.size();
  std::vector<GridFunction> w;
  w.push_back(band_ ? band_project(u) : u);
  std::vector<Complex> tmp(n);
  for (int j = 0; j < d; ++j) {
    GridFunction next = p_->forcing.empty() ? GridFunction::zeros(g) : p_->forcing.eval(t, g, j);
    if (band_ && !p_->forcing.empty()) next = band_project(next);
    for (int i = 0; i <= j; ++i) {
      const Quantized& op = ops_[static_cast<std::size_t>(i)];
      op.apply(t, w[static_cast<std::size_t>(j - i)].values.data(), tmp.data());
      const double c = binom(j, i);
      for (std::size_t k = 0; k < n; ++k) next.values[k] += Complex(tmp[k].imag(), -tmp[k].real()) * c;
    }
    w.push_back(std::move(next));
  }
  return w;
}

std::vector<CascadeLedger> derivative_cascade(const CauchyProblem& p, const SolveResult& r,
                                              int max_order, const SolveOptions& opt) {
  const Trajectory& tr = r.trajectory;
  if (tr.states.size() < 2) {
    throw Error(ErrorKind::kIncompleteLedger, "cascade needs a stored trajectory");
  }
  const Grid& g = p.grid();
  const std::size_t n = g.size();
  QuantizeOptions qo;
  qo.band_projected = opt.band_projected;
  const Quantized full(p.symbol.full(), g, qo);
  Forcing forcing = p.forcing;
  for (auto& phi : forcing.phi) {
    if (opt.band_projected) phi = band_project(phi);
  }
  const GridFunction g0 = opt.band_projected ? band_project(p.g) : p.g;

  std::vector<MultiIndex> alphas;
  for (int a0 = 0; a0 <= max_order; ++a0) {
    for (int a1 = 0; a1 <= (g.dim == 2 ? max_order - a0 : 0); ++a1) alphas.push_back({a0, a1});
  }
  std::vector<CascadeLedger> out;
  std::vector<Complex> au(n), adu(n);
  for (const auto& alpha : alphas) {
    CascadeLedger c;
    c.alpha = alpha;
    c.C = r.ledger.C_meas;
    c.times = tr.times;
    for (std::size_t s = 0; s < tr.states.size(); ++s) {
      const double t = tr.times[s];
      const GridFunction& u = tr.states[s];
      const GridFunction du = spectral_derivative(u, alpha);
      c.v_norm_sq.push_back(du.norm_sq());
      // Forcing of the differentiated equation: d^a f - i (d^a A u - A d^a u).
      full.apply(t, u.values.data(), au.data());
      full.apply(t, du.values.data(), adu.data());
      const GridFunction dau = spectral_derivative({g, au}, alpha);
      GridFunction F = forcing.empty() ? GridFunction::zeros(g)
                                       : spectral_derivative(forcing.eval(t, g), alpha);
      for (std::size_t k = 0; k < n; ++k) {
        const Complex comm = dau.values[k] - adu[k];
        F.values[k] += Complex(comm.imag(), -comm.real());
      }
      c.h.push_back(F.norm_sq());
    }
    // Upper-endpoint rule on each stored interval.
    const double v0 = spectral_derivative(g0, alpha).norm_sq();
    double integral = 0.0;
    c.bound_ok = true;
    for (std::size_t s = 0; s < c.times.size(); ++s) {
      if (s > 0) integral += (c.times[s] - c.times[s - 1]) * std::max(c.h[s], c.h[s - 1]);
      const double b = (v0 + integral) * std::exp(c.C * c.times[s]);
      c.bound_rhs.push_back(b);
      if (c.v_norm_sq[s] > b + 1e-8 * (1.0 + c.v_norm_sq[s])) c.bound_ok = false;
    }
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace hyps
