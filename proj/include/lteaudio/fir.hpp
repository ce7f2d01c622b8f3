// Linear-phase FIR lowpass design and evaluation.
#pragma once

#include <span>

#include "lteaudio/types.hpp"

namespace lteaudio {

struct FirFilter {
    RealVec taps;
    double cutoff = 0.0;  // design cutoff, Hz
    double fs = 0.0;      // design sample rate, Hz

    int length() const { return static_cast<int>(taps.size()); }
    /// (len - 1) / 2; lengths are always odd.
    int group_delay() const { return (length() - 1) / 2; }
    double dc_gain() const;
    /// |H(f)| at frequency `freq` for sample rate `fs`.
    double magnitude_response(double freq, double fs) const;
};

/// Hamming-windowed sinc, normalised to unit DC gain. Requires
/// 0 < cutoff < fs/2 and an odd tap count of at least 11.
FirFilter design_lowpass(double cutoff, double fs, int n_taps);

/// Full linear convolution (length in + taps - 1).
RealVec fir_filter_full(const FirFilter& f, std::span<const double> x);
ComplexVec fir_filter_full(const FirFilter& f, std::span<const cf64> x);

}  // namespace lteaudio
