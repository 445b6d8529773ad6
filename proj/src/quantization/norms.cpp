#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "hyps/quantization.hpp"
#include "quantization/fft.hpp"

namespace hyps {

namespace {

double euclid_sq(const std::vector<Complex>& v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return s;
}

void project_band(const Grid& g, const fft::Plan& plan, std::vector<Complex>& v) {
  const std::size_t n = v.size();
  std::vector<Complex> c(n);
  plan.forward(v.data(), c.data());
  for (std::size_t k = 0; k < n; ++k) c[k] = g.in_band(k) ? c[k] / static_cast<double>(n) : 0.0;
  plan.backward(c.data(), v.data());
}

NormResult dense_norm(const Grid& g, const LinearMap& op, const std::vector<std::size_t>& space) {
  const std::size_t n = g.size();
  const std::size_t d = space.size();
  const auto plan = fft::Plan::get(g.dim, g.M);
  Eigen::MatrixXcd a(d, d);
  std::vector<Complex> e(n), out(n), c(n);
  for (std::size_t col = 0; col < d; ++col) {
    std::fill(c.begin(), c.end(), Complex{0.0, 0.0});
    c[space[col]] = 1.0;
    plan->backward(c.data(), e.data());
    op(e.data(), out.data());
    plan->forward(out.data(), c.data());
    for (std::size_t row = 0; row < d; ++row) {
      a(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) =
          c[space[row]] / static_cast<double>(n);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a.adjoint() * a, Eigen::EigenvaluesOnly);
  NormResult r;
  r.value = std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
  r.converged = es.info() == Eigen::Success;
  r.iterations = 0;
  r.method = "dense";
  return r;
}

NormResult power_norm(const Grid& g, const LinearMap& op, const LinearMap& adjoint,
                      const NormOptions& opt) {
  const std::size_t n = g.size();
  const auto plan = fft::Plan::get(g.dim, g.M);
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Complex> v(n), w(n), z(n);
  for (auto& x : v) {
    const double re = normal(rng);
    const double im = normal(rng);
    x = Complex(re, im);
  }
  if (opt.band_projected) project_band(g, *plan, v);
  double nv = std::sqrt(euclid_sq(v));
  NormResult r;
  r.method = "power";
  r.converged = false;
  if (nv == 0.0) {
    r.converged = true;
    return r;
  }
  for (auto& x : v) x /= nv;
  double prev = -1.0;
  for (int it = 1; it <= opt.iters; ++it) {
    op(v.data(), w.data());
    if (opt.band_projected) project_band(g, *plan, w);
    const double lambda = euclid_sq(w);
    r.iterations = it;
    r.value = std::sqrt(lambda);
    if (lambda == 0.0) {
      r.converged = true;
      break;
    }
    if (prev >= 0.0 && std::abs(lambda - prev) <= opt.tol * lambda) {
      r.converged = true;
      break;
    }
    prev = lambda;
    adjoint(w.data(), z.data());
    if (opt.band_projected) project_band(g, *plan, z);
    const double nz = std::sqrt(euclid_sq(z));
    if (nz == 0.0) {
      r.converged = true;
      break;
    }
    for (std::size_t i = 0; i < n; ++i) v[i] = z[i] / nz;
  }
  return r;
}

}  // namespace

NormResult linear_operator_norm(const Grid& g, const LinearMap& op, const LinearMap& adjoint,
                                const NormOptions& opt) {
  g.validate();
  std::vector<std::size_t> space;
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (!opt.band_projected || g.in_band(k)) space.push_back(k);
  }
  const bool dense = opt.method == NormMethod::kDense ||
                     (opt.method == NormMethod::kAuto && space.size() <= opt.dense_limit);
  if (dense) {
    if (space.size() > 4096) throw Error(ErrorKind::kTooLarge, "dense norm needs <= 4096 modes");
    return dense_norm(g, op, space);
  }
  return power_norm(g, op, adjoint, opt);
}

NormResult adjoint_defect_norm(const Quantized& q, double t, const NormOptions& opt) {
  const std::size_t n = q.grid().size();
  LinearMap b = [&q, t, n](const Complex* in, Complex* out) {
    std::vector<Complex> tmp(n);
    q.apply(t, in, out);
    q.apply_adjoint(t, in, tmp.data());
    for (std::size_t i = 0; i < n; ++i) out[i] -= tmp[i];
  };
  LinearMap bt = [&b, n](const Complex* in, Complex* out) {
    b(in, out);
    for (std::size_t i = 0; i < n; ++i) out[i] = -out[i];
  };
  return linear_operator_norm(q.grid(), b, bt, opt);
}

NormResult adjoint_defect_norm(const SymbolExpr& s, double t, const Grid& g,
                               const NormOptions& opt) {
  QuantizeOptions qo;
  qo.band_projected = opt.band_projected;
  const Quantized q(s, g, qo);
  return adjoint_defect_norm(q, t, opt);
}

NormResult operator_norm_only(const Quantized& q, double t, const NormOptions& opt) {
  LinearMap a = [&q, t](const Complex* in, Complex* out) { q.apply(t, in, out); };
  LinearMap at = [&q, t](const Complex* in, Complex* out) { q.apply_adjoint(t, in, out); };
  return linear_operator_norm(q.grid(), a, at, opt);
}

OperatorNormReport operator_norm(const SymbolExpr& s, double t, const Grid& g,
                                 const NormOptions& opt, const SamplingBox& box) {
  QuantizeOptions qo;
  qo.band_projected = opt.band_projected;
  const Quantized q(s, g, qo);
  OperatorNormReport r;
  r.norm = operator_norm_only(q, t, opt);
  const int order = g.dim / 2 + 1;
  r.seminorm_bound = seminorm_q(s, 0.0, order, order, box, t);
  return r;
}

OperatorNormReport operator_norm(const SymbolExpr& s, double t, const Grid& g,
                                 const NormOptions& opt) {
  const double fmax = M_PI * g.M / g.L;
  SamplingBox box = SamplingBox::for_domain(g.dim, g.L, std::min(g.M, 64),
                                            std::max(1024.0, std::exp2(std::ceil(std::log2(fmax)))));
  return operator_norm(s, t, g, opt, box);
}

}  // namespace hyps
