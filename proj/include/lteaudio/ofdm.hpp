// OFDM modulation of resource grids to complex baseband and back.
#pragma once

#include <span>
#include <vector>

#include "lteaudio/numerology.hpp"
#include "lteaudio/resource_grid.hpp"
#include "lteaudio/types.hpp"

namespace lteaudio {

/// FFT bin of an active grid subcarrier. Lower half of the band sits in
/// the upper (negative-frequency) bins; DC stays empty.
int subcarrier_bin(const Numerology& num, int subcarrier);

/// One useful symbol (no CP) from a column of the grid.
ComplexVec ofdm_symbol(const ResourceGrid& grid, const Numerology& num, int symbol);

/// Unitary IFFT per symbol with CP prepended; one subframe of samples.
ComplexVec ofdm_modulate(const ResourceGrid& grid, const Numerology& num);

/// Input must be whole, timing-aligned subframes. Grids are numbered
/// first_subframe, first_subframe+1, ... modulo the frame length.
std::vector<ResourceGrid> ofdm_demodulate(std::span<const cf64> samples, const Numerology& num,
                                          int first_subframe = 0);

}  // namespace lteaudio
