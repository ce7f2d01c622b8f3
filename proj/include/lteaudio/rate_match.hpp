// Circular-buffer rate matching over [systematic | parity1 | parity2].
#pragma once

#include <span>

#include "lteaudio/turbo.hpp"
#include "lteaudio/types.hpp"

namespace lteaudio {

/// Reads E bits cyclically from the stream concatenation; E > 3K+12
/// repeats, E < 3K+12 punctures the tail of parity2 first.
Bits rate_match(const CodedBlock& coded, int coded_bits);
Bits rate_match(std::span<const Bit> concatenated, int coded_bits);

/// Inverse placement: sums repeated LLRs, punctured positions stay 0.
Llrs rate_dematch(std::span<const double> llrs, int K);

}  // namespace lteaudio
