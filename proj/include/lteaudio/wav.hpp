// RIFF/WAVE PCM 16-bit mono reader and writer.
#pragma once

#include <span>
#include <stdexcept>
#include <string>

#include "lteaudio/types.hpp"

namespace lteaudio {

constexpr int kWavSampleRate = 48000;

class WavError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Samples must satisfy |x| <= 1; x is stored as round(x * 32768)
/// saturated to the int16 range.
void wav_write(std::span<const double> samples, const std::string& path, int sample_rate = kWavSampleRate);

/// Rejects anything other than PCM, 16-bit, mono at `expected_rate`.
RealVec wav_read(const std::string& path, int expected_rate = kWavSampleRate);

}  // namespace lteaudio
