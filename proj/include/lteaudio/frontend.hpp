// Digital up-conversion from complex baseband to a real audio-band signal
// and the matching down-conversion.
//
// DUC: zero-stuff by the interpolation factor, lowpass (gain scaled by
// the factor), mix to the carrier, keep the real part.
// DDC: mix down with 2*e^{-j w n}, lowpass, keep every interp-th sample.
// Outputs are never truncated; each direction reports its delay instead.
#pragma once

#include <cstdint>
#include <span>

#include "lteaudio/fir.hpp"
#include "lteaudio/numerology.hpp"
#include "lteaudio/types.hpp"

namespace lteaudio {

constexpr int kDefaultFilterTaps = 63;
constexpr double kDefaultFilterCutoff = 4500.0;

/// 63 taps, 4.5 kHz cutoff at the audio rate.
FirFilter default_frontend_filter(const Numerology& num);

/// Throws when the filter passband cannot carry the occupied band or
/// the shifted band would cross Nyquist.
void check_frontend_filter(const FirFilter& filter, const Numerology& num);

/// Streaming interpolator + mixer. Carrier phase and filter history carry
/// across process() calls; flush() emits the filter tail.
class Upconverter {
public:
    Upconverter(const Numerology& num, FirFilter filter);

    RealVec process(std::span<const cf64> baseband);
    RealVec flush();
    /// Delay from a baseband sample to its audio image, in audio samples.
    int group_delay() const { return filter_.group_delay(); }

private:
    void push(cf64 v, RealVec& out);

    Numerology num_;
    FirFilter filter_;
    ComplexVec history_;  // zero-stuffed input, circular
    std::size_t pos_ = 0;
    std::uint64_t n_ = 0;  // output sample counter for the carrier phase
};

/// Streaming mixer + decimator. The decimation phase is chosen so that the
/// combined delay of this filter and a transmitter using a filter with
/// `tx_group_delay` taps of delay lands on a whole baseband sample.
class Downconverter {
public:
    Downconverter(const Numerology& num, FirFilter filter, int tx_group_delay);

    ComplexVec process(std::span<const double> audio);
    ComplexVec flush();
    /// Baseband-sample delay of ddc(duc(x)) relative to x.
    int total_delay() const { return total_delay_; }
    int decimation_phase() const { return phase_; }

private:
    void push(cf64 v, ComplexVec& out);

    Numerology num_;
    FirFilter filter_;
    int phase_ = 0;
    int total_delay_ = 0;
    ComplexVec history_;
    std::size_t pos_ = 0;
    std::uint64_t n_ = 0;  // input sample counter (mixing phase, decimation)
};

struct DucResult {
    RealVec audio;
    double gain = 1.0;    // normalisation applied to reach the 0.9 peak
    int group_delay = 0;  // audio samples
};

/// Full-signal DUC; output peak normalised to 0.9 (zero input stays zero).
DucResult duc(std::span<const cf64> baseband, const Numerology& num, const FirFilter& filter);

struct DdcResult {
    ComplexVec baseband;
    int group_delay = 0;  // baseband samples, assuming the transmitter used the same filter length
};

DdcResult ddc(std::span<const double> audio, const Numerology& num, const FirFilter& filter);

}  // namespace lteaudio
