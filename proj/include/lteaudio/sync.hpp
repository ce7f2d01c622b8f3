// PSS detection, frame alignment and scalar gain/phase correction.
#pragma once

#include <optional>
#include <span>
#include <vector>

#include "lteaudio/numerology.hpp"
#include "lteaudio/resource_grid.hpp"
#include "lteaudio/types.hpp"

namespace lteaudio {

struct Detection {
    std::size_t offset = 0;  // first useful (post-CP) sample of the PSS symbol
    double metric = 0.0;     // normalised correlation in [0, 1]
    int nid2 = 0;
    std::optional<double> cfo_hz;
};

constexpr double kDefaultSyncThreshold = 0.5;

/// Time-domain PSS symbol without CP.
ComplexVec pss_replica(int nid2, const Numerology& num);

/// Normalised correlation |sum r[k+n] conj(p[n])| / (|r_k| |p|) of the
/// capture against one replica, for every lag with a full window.
RealVec pss_correlation(std::span<const cf64> capture, std::span<const cf64> replica);

/// Local maxima above `threshold` for all three nid2 hypotheses, sorted by
/// metric (then nid2, then offset). Peaks closer than n_fft/2 to a
/// stronger peak are suppressed.
std::vector<Detection> correlate_detect(std::span<const cf64> capture, const Numerology& num,
                                        double threshold = kDefaultSyncThreshold);

/// Start of the frame whose PSS produced `detection`.
std::ptrdiff_t frame_start_of(const Detection& detection, const Numerology& num);

struct AlignedFrame {
    std::size_t frame_start = 0;
    std::vector<ComplexVec> subframes;  // one frame's worth
};

/// Slices the frame containing the detected PSS into subframe blocks.
/// Throws if the capture ends before the frame does.
AlignedFrame frame_align(std::span<const cf64> capture, const Detection& detection, const Numerology& num);

/// Least-squares scalar g = sum(rx conj(ref)) / sum |ref|^2 over the PSS cells.
cf64 estimate_pss_gain(const ResourceGrid& grid, const Numerology& num, int nid2);

/// Divides every cell by the estimated gain. Throws "no PSS energy" when
/// |g| < 1e-9.
ResourceGrid gain_phase_correct(const ResourceGrid& grid, const Numerology& num, int nid2);
ResourceGrid apply_gain(const ResourceGrid& grid, cf64 gain);

/// CP-based frequency offset estimate over the symbols of subframe-aligned
/// samples. Unambiguous range is +/- half a subcarrier spacing.
double cfo_estimate_cp(std::span<const cf64> samples, const Numerology& num);

/// Removes a frequency offset: r[n] * e^{-j 2 pi f n / fs}.
ComplexVec cfo_correct(std::span<const cf64> samples, double cfo_hz, double fs, std::size_t start_index = 0);

}  // namespace lteaudio
