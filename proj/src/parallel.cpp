#include "dss/parallel.hpp"

#include <algorithm>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "dss/errors.hpp"

namespace dss {

int worker_count() {
#ifdef _OPENMP
  int n = omp_get_max_threads();
#else
  int n = 1;
#endif
  if (const char* cap = std::getenv("DSS_THREADS")) {
    int c = std::atoi(cap);
    if (c >= 1) n = std::min(n, c);
  }
  return n;
}

void apply_thread_cap() {
#ifdef _OPENMP
  omp_set_num_threads(worker_count());
#endif
}

static constexpr std::ptrdiff_t kBlock = 256;

double kahan_sum(const std::vector<double>& v) {
  double s = 0.0, c = 0.0;
  for (double x : v) {
    double t = x - c;
    double u = s + t;
    c = (u - s) - t;
    s = u;
  }
  return s;
}

double chunked_mean(const Eigen::VectorXd& v) {
  const std::ptrdiff_t n = v.size();
  if (n == 0) return 0.0;
  const std::ptrdiff_t nblocks = (n + kBlock - 1) / kBlock;
  std::vector<double> partial(static_cast<std::size_t>(nblocks));
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::ptrdiff_t b = 0; b < nblocks; ++b) {
    const std::ptrdiff_t lo = b * kBlock;
    const std::ptrdiff_t hi = std::min(n, lo + kBlock);
    double s = 0.0, c = 0.0;
    for (std::ptrdiff_t i = lo; i < hi; ++i) {
      double t = v[i] - c;
      double u = s + t;
      c = (u - s) - t;
      s = u;
    }
    partial[static_cast<std::size_t>(b)] = s;
  }
  return kahan_sum(partial) / static_cast<double>(n);
}

double quantile(const Eigen::VectorXd& v, double q) {
  if (v.size() == 0) throw ArgumentError("quantile of empty vector");
  std::vector<double> s(v.data(), v.data() + v.size());
  std::sort(s.begin(), s.end());
  const double h = q * static_cast<double>(s.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= s.size()) return s.back();
  const double frac = h - static_cast<double>(lo);
  return s[lo] + frac * (s[lo + 1] - s[lo]);
}

}  // namespace dss
