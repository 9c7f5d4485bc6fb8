#include "gnls/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace gnls::fft {
namespace {

// fftw_plan_* is not thread-safe; execution of an existing plan is.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(const std::vector<int>& shape, Direction dir) {
    std::lock_guard lock(mutex_);
    auto key = std::make_tuple(shape, dir);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;

    const auto n = std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                                   std::multiplies<>());
    auto* in = fftw_alloc_complex(n);
    auto* out = fftw_alloc_complex(n);
    const int sign = dir == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD;
    fftw_plan plan = fftw_plan_dft(static_cast<int>(shape.size()), shape.data(), in, out,
                                   sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(in);
    fftw_free(out);
    if (plan == nullptr) throw std::runtime_error("fftw: plan creation failed");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<std::vector<int>, Direction>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

}  // namespace

void transform(std::span<const std::complex<double>> in, std::span<std::complex<double>> out,
               const std::vector<int>& shape, Direction dir) {
  const auto n = std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                                 std::multiplies<>());
  if (in.size() != n || out.size() != n)
    throw std::invalid_argument("fft::transform: buffer size does not match shape");
  if (in.data() == out.data())
    throw std::invalid_argument("fft::transform: in-place transforms are not supported");
  fftw_plan plan = cache().get(shape, dir);
  // c2c out-of-place plans preserve their input.
  auto* src = reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in.data()));
  auto* dst = reinterpret_cast<fftw_complex*>(out.data());
  fftw_execute_dft(plan, src, dst);
}

}  // namespace gnls::fft
