// Channel models: ideal pass-through and AWGN at a burst-measured SNR.
// WAV file I/O lives in wav.hpp.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "lteaudio/types.hpp"

namespace lteaudio {

enum class ChannelKind { ideal, awgn, wav_out, wav_in };

struct ChannelSpec {
    ChannelKind kind = ChannelKind::ideal;
    std::optional<double> snr_db;  // awgn only
    std::uint64_t seed = 0;
    std::string path;              // wav kinds only

    /// awgn needs a finite SNR, wav kinds need a path.
    void validate() const;
};

ComplexVec apply_ideal(std::span<const cf64> samples);
RealVec apply_ideal(std::span<const double> samples);

/// Adds zero-mean Gaussian noise of variance P / 10^(snr_db/10), where P is
/// the mean power of this burst. Complex input splits the variance evenly
/// over I and Q. Deterministic for a given seed.
ComplexVec apply_awgn(std::span<const cf64> samples, double snr_db, std::uint64_t seed);
RealVec apply_awgn(std::span<const double> samples, double snr_db, std::uint64_t seed);

/// Mixes several integers into one noise seed (run seed, module, tick).
std::uint64_t derive_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c = 0);

}  // namespace lteaudio
