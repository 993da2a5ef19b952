#include "fft.hpp"

#include <fftw3.h>

#include <array>
#include <map>
#include <mutex>

namespace netstate::detail {

namespace {

enum Kind : std::size_t { complex_forward, complex_backward, real_forward, real_backward };

// kind, n, count, input stride, input distance, output stride, output distance
using Key = std::array<std::size_t, 7>;

struct PlanCache {
  std::mutex mutex;
  std::map<Key, fftw_plan> plans;

  ~PlanCache() {
    for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
  }
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

// FFTW_ESTIMATE never touches the data, so planning on the caller's buffers
// is safe; UNALIGNED lets the plan run on any later buffer.
constexpr unsigned kFlags = FFTW_ESTIMATE | FFTW_UNALIGNED;

template <class Make>
fftw_plan cached_plan(const Key& key, Make make) {
  auto& c = cache();
  std::lock_guard lock(c.mutex);
  auto it = c.plans.find(key);
  if (it != c.plans.end()) return it->second;
  fftw_plan plan = make();
  c.plans.emplace(key, plan);
  return plan;
}

int as_int(std::size_t v) { return static_cast<int>(v); }

}  // namespace

void fft_many(std::complex<double>* data, std::size_t n, std::size_t count, std::size_t stride,
              std::size_t dist, FftDirection dir) {
  const bool fwd = dir == FftDirection::forward;
  auto* buf = reinterpret_cast<fftw_complex*>(data);
  const Key key{fwd ? complex_forward : complex_backward, n, count, stride, dist, stride, dist};
  fftw_plan plan = cached_plan(key, [&] {
    const int len = as_int(n);
    return fftw_plan_many_dft(1, &len, as_int(count), buf, nullptr, as_int(stride), as_int(dist), buf, nullptr,
                              as_int(stride), as_int(dist), fwd ? FFTW_FORWARD : FFTW_BACKWARD, kFlags);
  });
  fftw_execute_dft(plan, buf, buf);
}

void rfft_many(const double* in, std::size_t in_stride, std::size_t in_dist, std::complex<double>* out,
               std::size_t out_stride, std::size_t out_dist, std::size_t n, std::size_t count) {
  auto* src = const_cast<double*>(in);
  auto* dst = reinterpret_cast<fftw_complex*>(out);
  const Key key{real_forward, n, count, in_stride, in_dist, out_stride, out_dist};
  fftw_plan plan = cached_plan(key, [&] {
    const int len = as_int(n);
    return fftw_plan_many_dft_r2c(1, &len, as_int(count), src, nullptr, as_int(in_stride), as_int(in_dist), dst,
                                  nullptr, as_int(out_stride), as_int(out_dist), kFlags);
  });
  fftw_execute_dft_r2c(plan, src, dst);
}

void irfft_many(std::complex<double>* in, std::size_t in_stride, std::size_t in_dist, double* out,
                std::size_t out_stride, std::size_t out_dist, std::size_t n, std::size_t count) {
  auto* src = reinterpret_cast<fftw_complex*>(in);
  const Key key{real_backward, n, count, in_stride, in_dist, out_stride, out_dist};
  fftw_plan plan = cached_plan(key, [&] {
    const int len = as_int(n);
    return fftw_plan_many_dft_c2r(1, &len, as_int(count), src, nullptr, as_int(in_stride), as_int(in_dist), out,
                                  nullptr, as_int(out_stride), as_int(out_dist), kFlags);
  });
  fftw_execute_dft_c2r(plan, src, out);
}

}  // namespace netstate::detail
