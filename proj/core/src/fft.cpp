#include "ctsim/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace ctsim {

namespace {

// FFTW planner functions are not thread-safe; plan creation is serialized and
// plans are cached per (dim, n). Plans are created with FFTW_UNALIGNED so they
// can execute on any caller buffer (std::vector storage) via the new-array
// interface, which is thread-safe.
struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

class PlanCache {
public:
  PlanPair get(const Grid& g) {
    const std::pair<int, int> key{g.dim, g.n};
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;

    int dims[3] = {g.n, g.n, g.n};
    std::vector<fftw_complex> scratch(g.size());
    PlanPair pair;
    pair.forward = fftw_plan_dft(g.dim, dims, scratch.data(), scratch.data(), FFTW_FORWARD,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
    pair.backward = fftw_plan_dft(g.dim, dims, scratch.data(), scratch.data(), FFTW_BACKWARD,
                                  FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_[key] = pair;
    return pair;
  }

private:
  std::mutex mutex_;
  std::map<std::pair<int, int>, PlanPair> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

} // namespace

void fft_forward(const Grid& g, cplx* values) {
  auto pair = cache().get(g);
  fftw_execute_dft(pair.forward, reinterpret_cast<fftw_complex*>(values),
                   reinterpret_cast<fftw_complex*>(values));
}

void fft_inverse(const Grid& g, cplx* values) {
  auto pair = cache().get(g);
  fftw_execute_dft(pair.backward, reinterpret_cast<fftw_complex*>(values),
                   reinterpret_cast<fftw_complex*>(values));
  const double scale = 1.0 / static_cast<double>(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) values[i] *= scale;
}

void fft_forward(Field& f) {
  for (int c = 0; c < f.components; ++c) fft_forward(f.grid, f.comp(c).data());
}

void fft_inverse(Field& f) {
  for (int c = 0; c < f.components; ++c) fft_inverse(f.grid, f.comp(c).data());
}

double spectral_weight(const Grid& g) {
  return g.weight() / static_cast<double>(g.size());
}

} // namespace ctsim
