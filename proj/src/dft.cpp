#include "blindmix/dft.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

#include <fftw3.h>

namespace blindmix {
namespace {

// FFTW planning is not thread-safe and plans own their buffers, so all
// transforms go through one mutex-guarded plan cache. Transforms only run in
// setup and test code, never inside solver iterations.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  CVec run(const CVec& x, int sign) {
    const int n = static_cast<int>(x.size());
    if (n == 0) throw std::invalid_argument("dft: empty input");
    std::lock_guard<std::mutex> lock(mutex_);
    Entry& e = entry(n, sign);
    for (int i = 0; i < n; ++i) {
      e.in[i][0] = x[i].real();
      e.in[i][1] = x[i].imag();
    }
    fftw_execute(e.plan);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    CVec out(n);
    for (int i = 0; i < n; ++i) {
      out[i] = Complex(e.out[i][0] * scale, e.out[i][1] * scale);
    }
    return out;
  }

 private:
  struct Entry {
    fftw_complex* in = nullptr;
    fftw_complex* out = nullptr;
    fftw_plan plan = nullptr;
  };

  Entry& entry(int n, int sign) {
    auto key = std::make_pair(n, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    Entry e;
    e.in = fftw_alloc_complex(n);
    e.out = fftw_alloc_complex(n);
    e.plan = fftw_plan_dft_1d(n, e.in, e.out, sign, FFTW_ESTIMATE);
    return plans_.emplace(key, e).first->second;
  }

  std::mutex mutex_;
  std::map<std::pair<int, int>, Entry> plans_;
};

}  // namespace

CVec dft_unitary(const CVec& x) {
  return PlanCache::instance().run(x, FFTW_FORWARD);
}

CVec idft_unitary(const CVec& x) {
  return PlanCache::instance().run(x, FFTW_BACKWARD);
}

}  // namespace blindmix
