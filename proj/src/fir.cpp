#include "lteaudio/fir.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

namespace lteaudio {

double FirFilter::dc_gain() const { return std::accumulate(taps.begin(), taps.end(), 0.0); }

double FirFilter::magnitude_response(double freq, double rate) const {
    cf64 acc{0.0, 0.0};
    const double w = 2.0 * std::numbers::pi * freq / rate;
    for (int n = 0; n < length(); ++n) acc += taps[n] * std::polar(1.0, -w * n);
    return std::abs(acc);
}

FirFilter design_lowpass(double cutoff, double fs, int n_taps) {
    if (!(fs > 0.0) || !(cutoff > 0.0) || !(cutoff < fs / 2.0))
        throw std::invalid_argument(fmt::format("design_lowpass: cutoff {} Hz must lie in (0, {}) Hz", cutoff, fs / 2.0));
    if (n_taps < 11 || n_taps % 2 == 0)
        throw std::invalid_argument(fmt::format("design_lowpass: tap count must be odd and >= 11, got {}", n_taps));
    FirFilter f;
    f.cutoff = cutoff;
    f.fs = fs;
    f.taps.resize(n_taps);
    const int mid = (n_taps - 1) / 2;
    const double fc = cutoff / fs;  // cycles per sample
    for (int n = 0; n < n_taps; ++n) {
        const int k = n - mid;
        const double sinc = k == 0 ? 2.0 * fc : std::sin(2.0 * std::numbers::pi * fc * k) / (std::numbers::pi * k);
        const double window = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * n / (n_taps - 1));
        f.taps[n] = sinc * window;
    }
    const double gain = f.dc_gain();
    for (auto& t : f.taps) t /= gain;
    // exact symmetry despite rounding in sin()
    for (int n = 0; n < mid; ++n) f.taps[n_taps - 1 - n] = f.taps[n];
    return f;
}

template <typename T>
static std::vector<T> convolve(const FirFilter& f, std::span<const T> x) {
    if (x.empty()) return {};
    std::vector<T> y(x.size() + f.taps.size() - 1, T{});
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < f.taps.size(); ++j) y[i + j] += f.taps[j] * x[i];
    return y;
}

RealVec fir_filter_full(const FirFilter& f, std::span<const double> x) { return convolve(f, x); }
ComplexVec fir_filter_full(const FirFilter& f, std::span<const cf64> x) { return convolve(f, x); }

}  // namespace lteaudio
