#include "fracgreen/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

namespace fracgreen {
namespace {

// Plan cache keyed by (rank, n, sign). Plans are created with FFTW_ESTIMATE
// and FFTW_UNALIGNED so they can execute on any caller-owned buffer via the
// new-array interface; fftw_execute_dft itself is thread-safe.
std::mutex plan_mutex;

fftw_plan cached_plan(int rank, int n, int sign) {
  static std::map<std::tuple<int, int, int>, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(plan_mutex);
  auto key = std::make_tuple(rank, n, sign);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<cplx> scratch(rank == 1 ? n : std::size_t(n) * n);
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  fftw_plan p =
      rank == 1
          ? fftw_plan_dft_1d(n, buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED)
          : fftw_plan_dft_2d(n, n, buf, buf, sign,
                             FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!p) throw std::runtime_error("fftw planning failed");
  cache.emplace(key, p);
  return p;
}

fftw_plan cached_line_plan(int n, int stride, int sign) {
  static std::map<std::tuple<int, int, int>, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(plan_mutex);
  auto key = std::make_tuple(n, stride, sign);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<cplx> scratch(std::size_t(n) * stride);
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  int dims[1] = {n};
  fftw_plan p = fftw_plan_many_dft(1, dims, 1, buf, nullptr, stride, 0, buf,
                                   nullptr, stride, 0, sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!p) throw std::runtime_error("fftw planning failed");
  cache.emplace(key, p);
  return p;
}

void execute(fftw_plan p, cplx* data) {
  auto* buf = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(p, buf, buf);
}

}  // namespace

void fft_forward(int rank, int n, std::vector<cplx>& v) {
  execute(cached_plan(rank, n, FFTW_FORWARD), v.data());
}

void fft_backward(int rank, int n, std::vector<cplx>& v) {
  execute(cached_plan(rank, n, FFTW_BACKWARD), v.data());
  double norm = 1.0;
  for (int r = 0; r < rank; ++r) norm /= n;
  for (auto& z : v) z *= norm;
}

void fft_forward_line(int n, cplx* data, int stride) {
  execute(cached_line_plan(n, stride, FFTW_FORWARD), data);
}

void fft_backward_line(int n, cplx* data, int stride) {
  execute(cached_line_plan(n, stride, FFTW_BACKWARD), data);
  double norm = 1.0 / n;
  for (int k = 0; k < n; ++k) data[std::size_t(k) * stride] *= norm;
}

}  // namespace fracgreen
