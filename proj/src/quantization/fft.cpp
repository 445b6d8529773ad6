#include "quantization/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>
#include <vector>

namespace hyps::fft {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

Plan::Plan(int dim, int M) {
  const std::size_t n = dim == 1 ? M : static_cast<std::size_t>(M) * M;
  std::vector<fftw_complex> a(n), b(n);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  if (dim == 1) {
    fwd_ = fftw_plan_dft_1d(M, a.data(), b.data(), FFTW_FORWARD, flags);
    bwd_ = fftw_plan_dft_1d(M, a.data(), b.data(), FFTW_BACKWARD, flags);
  } else {
    fwd_ = fftw_plan_dft_2d(M, M, a.data(), b.data(), FFTW_FORWARD, flags);
    bwd_ = fftw_plan_dft_2d(M, M, a.data(), b.data(), FFTW_BACKWARD, flags);
  }
}

Plan::~Plan() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
}

std::shared_ptr<const Plan> Plan::get(int dim, int M) {
  std::lock_guard<std::mutex> lock(planner_mutex());
  static std::map<std::pair<int, int>, std::shared_ptr<const Plan>> cache;
  auto& slot = cache[{dim, M}];
  if (!slot) slot = std::shared_ptr<const Plan>(new Plan(dim, M));
  return slot;
}

void Plan::forward(const std::complex<double>* in, std::complex<double>* out) const {
  // FFTW does not modify the input of an out-of-place complex transform.
  auto* i = reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in));
  fftw_execute_dft(static_cast<fftw_plan>(fwd_), i, reinterpret_cast<fftw_complex*>(out));
}

void Plan::backward(const std::complex<double>* in, std::complex<double>* out) const {
  auto* i = reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in));
  fftw_execute_dft(static_cast<fftw_plan>(bwd_), i, reinterpret_cast<fftw_complex*>(out));
}

}  // namespace hyps::fft
