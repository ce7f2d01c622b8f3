// Common value types shared across the signal chain.
#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace lteaudio {

using Bit = std::uint8_t;
using Bits = std::vector<Bit>;
using cf64 = std::complex<double>;
using ComplexVec = std::vector<cf64>;
using RealVec = std::vector<double>;

// Soft values follow one convention everywhere in this library:
// a positive LLR means bit 0 is more likely.
using Llrs = std::vector<double>;

}  // namespace lteaudio
