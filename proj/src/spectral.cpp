#include "kinkflow/spectral.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <mutex>

#include <fftw3.h>

#include "kinkflow/error.hpp"

namespace kinkflow {

namespace {

struct Plans {
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;
};

// The planner is not re-entrant; execution with new arrays is.
Plans plans_for(int m) {
  static std::mutex mtx;
  static std::map<int, Plans> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(m);
  if (it != cache.end()) return it->second;
  double* r = fftw_alloc_real(m);
  fftw_complex* c = fftw_alloc_complex(m / 2 + 1);
  Plans p;
  p.fwd = fftw_plan_dft_r2c_1d(m, r, c, FFTW_ESTIMATE);
  p.inv = fftw_plan_dft_c2r_1d(m, c, r, FFTW_ESTIMATE);
  fftw_free(r);
  fftw_free(c);
  cache[m] = p;
  return p;
}

struct RealBuf {
  double* p;
  explicit RealBuf(int m) : p(fftw_alloc_real(m)) {}
  ~RealBuf() { fftw_free(p); }
};
struct CplxBuf {
  fftw_complex* p;
  explicit CplxBuf(int m) : p(fftw_alloc_complex(m)) {}
  ~CplxBuf() { fftw_free(p); }
};

}  // namespace

std::vector<std::vector<double>> cosine_derivatives(const std::vector<double>& f, double dx,
                                                    std::initializer_list<int> orders) {
  const int n = int(f.size());
  if (n < 4) throw config_error("bad-grid", "too few nodes for spectral derivative");
  const int m = 2 * (n - 1);
  const int nk = m / 2 + 1;
  const Plans plans = plans_for(m);

  RealBuf ext(m);
  for (int i = 0; i < n; ++i) ext.p[i] = f[i];
  for (int i = 1; i < n - 1; ++i) ext.p[m - i] = f[i];
  CplxBuf spec(nk);
  fftw_execute_dft_r2c(plans.fwd, ext.p, spec.p);

  const double period = dx * m;
  std::vector<std::vector<double>> out;
  CplxBuf work(nk);
  RealBuf back(m);
  for (int order : orders) {
    for (int k = 0; k < nk; ++k) {
      const double kk = 2.0 * M_PI * k / period;
      std::complex<double> z(spec.p[k][0], spec.p[k][1]);
      std::complex<double> mult = std::pow(std::complex<double>(0.0, kk), order);
      if (k == nk - 1 && (order % 2)) mult = 0.0;  // Nyquist mode has no odd derivative
      z *= mult / double(m);
      work.p[k][0] = z.real();
      work.p[k][1] = z.imag();
    }
    fftw_execute_dft_c2r(plans.inv, work.p, back.p);
    out.emplace_back(back.p, back.p + n);
  }
  return out;
}

}  // namespace kinkflow
