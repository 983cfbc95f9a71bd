#pragma once

#include <complex>
#include <numbers>
#include <vector>

namespace teichstab {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

namespace spectral {

/// Forward DFT normalized so that c[k] = (1/N) sum_j v[j] exp(-2 pi i jk/N).
std::vector<cplx> forward(const std::vector<cplx>& values);

/// Inverse of `forward`: v[j] = sum_k c[k] exp(2 pi i jk/N).
std::vector<cplx> inverse(const std::vector<cplx>& coeffs);

/// Signed mode number of FFT slot `idx` on an N-point grid, range [-N/2, N/2).
inline int mode_of_index(int idx, int n) { return idx < n / 2 ? idx : idx - n; }

/// FFT slot of signed mode `k` on an N-point grid.
inline int index_of_mode(int k, int n) { return k >= 0 ? k : k + n; }

/// Evaluates the trigonometric interpolant with FFT-ordered coefficients at
/// phase `phase` = 2 pi x / period. The Nyquist mode is split symmetrically.
cplx evaluate(const std::vector<cplx>& coeffs, double phase);

/// Same as `evaluate` for several phases at once.
std::vector<cplx> evaluate(const std::vector<cplx>& coeffs, const std::vector<double>& phases);

/// Evaluates several coefficient arrays of equal length at one phase,
/// sharing the exponential recurrence.
void evaluate_many(const std::vector<const std::vector<cplx>*>& coeffs, double phase, cplx* out);

/// Resamples FFT-ordered coefficients to an M-point grid (zero padding or
/// truncation; the Nyquist mode is split when padding).
std::vector<cplx> resample_coeffs(const std::vector<cplx>& coeffs, int m);

}  // namespace spectral
}  // namespace teichstab
