// Gray-mapped LTE constellations (QPSK, 16QAM, 64QAM) with unit average
// energy, and hard / max-log soft demappers.
#pragma once

#include <span>

#include "lteaudio/types.hpp"

namespace lteaudio {

/// All 2^order points indexed by their bit label (first bit = MSB).
ComplexVec constellation(int order);

ComplexVec modulate(std::span<const Bit> bits, int order);

/// Minimum-distance decisions. A symbol equidistant from two points
/// resolves each ambiguous bit to 0.
Bits demod_hard(std::span<const cf64> symbols, int order);

/// LLR = (min_{bit=1} |y-s|^2 - min_{bit=0} |y-s|^2) / noise_variance,
/// positive means bit 0.
Llrs demod_soft(std::span<const cf64> symbols, int order, double noise_variance);

}  // namespace lteaudio
