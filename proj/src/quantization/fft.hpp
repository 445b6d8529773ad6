#pragma once

#include <complex>
#include <memory>

#include "hyps/grid.hpp"

namespace hyps::fft {

// Unnormalized transforms: forward sums u_j exp(-i xi_k x_j), backward sums
// c_k exp(+i xi_k x_j).  Plans are shared per (dim, M); execution is
// thread safe.
class Plan {
 public:
  static std::shared_ptr<const Plan> get(int dim, int M);
  ~Plan();

  void forward(const std::complex<double>* in, std::complex<double>* out) const;
  void backward(const std::complex<double>* in, std::complex<double>* out) const;

  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;

 private:
  Plan(int dim, int M);
  void* fwd_ = nullptr;
  void* bwd_ = nullptr;
};

}  // namespace hyps::fft
