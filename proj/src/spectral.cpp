#include "teichstab/spectral.hpp"

#include <unsupported/Eigen/FFT>

namespace teichstab::spectral {

namespace {

Eigen::FFT<double>& engine() {
    thread_local Eigen::FFT<double> fft = [] {
        Eigen::FFT<double> f;
        f.SetFlag(Eigen::FFT<double>::Unscaled);
        return f;
    }();
    return fft;
}

}  // namespace

std::vector<cplx> forward(const std::vector<cplx>& values) {
    std::vector<cplx> out;
    engine().fwd(out, values);
    const double scale = 1.0 / static_cast<double>(values.size());
    for (auto& c : out) c *= scale;
    return out;
}

std::vector<cplx> inverse(const std::vector<cplx>& coeffs) {
    std::vector<cplx> out;
    engine().inv(out, coeffs);
    return out;
}

cplx evaluate(const std::vector<cplx>& coeffs, double phase) {
    const int n = static_cast<int>(coeffs.size());
    const cplx step = std::polar(1.0, phase);
    cplx sum = coeffs[0];
    cplx rot = step;
    const int half = n / 2;
    for (int k = 1; k < (n + 1) / 2; ++k) {
        sum += coeffs[k] * rot + coeffs[n - k] * std::conj(rot);
        rot *= step;
    }
    if (n % 2 == 0) {
        // rot == exp(i half phase); cosine split of the Nyquist mode
        sum += coeffs[half] * rot.real();
    }
    return sum;
}

void evaluate_many(const std::vector<const std::vector<cplx>*>& coeffs, double phase, cplx* out) {
    const std::size_t m = coeffs.size();
    if (m == 0) return;
    const int n = static_cast<int>(coeffs[0]->size());
    const cplx step = std::polar(1.0, phase);
    for (std::size_t q = 0; q < m; ++q) out[q] = (*coeffs[q])[0];
    cplx rot = step;
    for (int k = 1; k < (n + 1) / 2; ++k) {
        const cplx rc = std::conj(rot);
        for (std::size_t q = 0; q < m; ++q) out[q] += (*coeffs[q])[k] * rot + (*coeffs[q])[n - k] * rc;
        rot *= step;
    }
    if (n % 2 == 0)
        for (std::size_t q = 0; q < m; ++q) out[q] += (*coeffs[q])[n / 2] * rot.real();
}

std::vector<cplx> evaluate(const std::vector<cplx>& coeffs, const std::vector<double>& phases) {
    std::vector<cplx> out(phases.size());
    for (std::size_t p = 0; p < phases.size(); ++p) out[p] = evaluate(coeffs, phases[p]);
    return out;
}

std::vector<cplx> resample_coeffs(const std::vector<cplx>& coeffs, int m) {
    const int n = static_cast<int>(coeffs.size());
    std::vector<cplx> out(m, cplx(0.0));
    const int keep = std::min(n, m);
    const int half = keep / 2;
    for (int k = -half; k < half; ++k) {
        if (k == -half && keep % 2 == 0) continue;
        out[index_of_mode(k, m)] = coeffs[index_of_mode(k, n)];
    }
    if (keep % 2 == 0) {
        const cplx nyq = coeffs[index_of_mode(-half, n)];
        if (m > n) {
            out[index_of_mode(-half, m)] = 0.5 * nyq;
            out[index_of_mode(half, m)] = 0.5 * nyq;
        } else if (m == n) {
            out[index_of_mode(-half, m)] = nyq;
        } else {
            // truncation: fold the pair (+half, -half) of the finer grid
            out[index_of_mode(-half, m)] = coeffs[index_of_mode(-half, n)] + coeffs[index_of_mode(half, n)];
        }
    }
    return out;
}

}  // namespace teichstab::spectral
