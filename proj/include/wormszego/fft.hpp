#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

#include <fftw3.h>

namespace wormszego::fft {

enum class Sign { negative = FFTW_FORWARD, positive = FFTW_BACKWARD };

// Plans are created once per (n, sign) under a lock and executed with the
// new-array interface, which FFTW documents as safe for concurrent use.
class PlanCache
{
public:
  static PlanCache &instance()
  {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(std::size_t n, Sign sign)
  {
    std::lock_guard<std::mutex> g(lock_);
    const auto key = std::make_pair(n, static_cast<int>(sign));
    if (auto it = plans_.find(key); it != plans_.end())
      return it->second;
    std::vector<std::complex<double>> scratch(n);
    auto *buf = reinterpret_cast<fftw_complex *>(scratch.data());
    fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, static_cast<int>(sign),
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, p);
    return p;
  }

  PlanCache(const PlanCache &) = delete;
  PlanCache &operator=(const PlanCache &) = delete;

private:
  PlanCache() = default;
  ~PlanCache()
  {
    for (auto &kv : plans_)
      fftw_destroy_plan(kv.second);
  }

  std::mutex lock_;
  std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

// Unnormalized in-place DFT: out_k = sum_m in_m e^{sign * 2 pi i k m / n}.
inline void transform(std::span<std::complex<double>> data, Sign sign)
{
  fftw_plan p = PlanCache::instance().get(data.size(), sign);
  auto *buf = reinterpret_cast<fftw_complex *>(data.data());
  fftw_execute_dft(p, buf, buf);
}

} // namespace wormszego::fft
