#pragma once

// Thin FFTW wrapper for centred 1D transforms on symmetric grids.

#include <fftw3.h>

#include <complex>
#include <mutex>
#include <vector>

#include "lmtpsi/error.hpp"

namespace lmtpsi::fft {

using cvec = std::vector<std::complex<double>>;

namespace detail {
// The FFTW planner is not re-entrant; execution is.
inline std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class Plan {
 public:
  Plan(int n, int sign) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    cvec scratch(static_cast<std::size_t>(n));
    auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
    plan_ = fftw_plan_dft_1d(n, p, p, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!plan_) fail(ErrorKind::numerical_integrity, "FFTW failed to create a plan");
  }
  ~Plan() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;

  void execute(cvec& data) const {
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan_, p, p);
  }

 private:
  fftw_plan plan_ = nullptr;
};
}  // namespace detail

/// out_j = sum_i in_i exp(sign * 2 pi i (i - M/2)(j - M/2) / M) for even M,
/// i.e. a DFT whose index origin sits at the array centre.
/// sign = -1 is the forward (e^{-ikr}) convention.
inline cvec centered_dft(const cvec& in, int sign) {
  const std::size_t m = in.size();
  if (m < 2 || m % 2 != 0) fail(ErrorKind::domain, "centred DFT needs an even length >= 2");
  cvec data(in);
  for (std::size_t i = 1; i < m; i += 2) data[i] = -data[i];
  detail::Plan plan(static_cast<int>(m), sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD);
  plan.execute(data);
  // (-1)^{M/2} from the (M/2)^2 cross term, (-1)^j from the output shift.
  const double global = (m / 2) % 2 == 0 ? 1.0 : -1.0;
  for (std::size_t j = 0; j < m; ++j) data[j] *= (j % 2 == 0) ? global : -global;
  return data;
}

inline cvec centered_dft(const std::vector<double>& in, int sign) {
  return centered_dft(cvec(in.begin(), in.end()), sign);
}

}  // namespace lmtpsi::fft
