// LTE rate-1/3 turbo code: two 8-state RSC encoders (feedback 1+D^2+D^3,
// feedforward 1+D+D^3) joined by a QPP interleaver, and an iterative
// max-log-MAP decoder.
#pragma once

#include <functional>
#include <span>

#include "lteaudio/qpp.hpp"
#include "lteaudio/types.hpp"

namespace lteaudio {

constexpr int kTurboTailBits = 4;

/// Three streams of K+4 bits. The 12 trellis-termination bits are spread
/// over the stream tails in the LTE order:
///   systematic: x_K  z_K+1 x'_K  z'_K+1
///   parity1:    z_K  x_K+2 z'_K  x'_K+2
///   parity2:    x_K+1 z_K+2 x'_K+1 z'_K+2
struct CodedBlock {
    Bits systematic;
    Bits parity1;
    Bits parity2;

    /// [systematic | parity1 | parity2], 3K+12 bits.
    Bits concatenated() const;
    static CodedBlock from_concatenated(std::span<const Bit> bits);
};

CodedBlock turbo_encode(const QppParams& qpp, std::span<const Bit> bits);

struct TurboDecodeResult {
    Bits bits;
    int iterations_used = 0;
};

/// Called with the hard decisions after each full iteration; returning
/// true stops the decoder.
using EarlyStop = std::function<bool(std::span<const Bit>)>;

constexpr int kDefaultTurboIterations = 8;
constexpr double kDefaultExtrinsicScale = 0.75;

/// `llrs` holds 3K+12 values in CodedBlock::concatenated() order.
TurboDecodeResult turbo_decode(const QppParams& qpp, std::span<const double> llrs,
                               int max_iterations = kDefaultTurboIterations,
                               double extrinsic_scale = kDefaultExtrinsicScale,
                               const EarlyStop& early_stop = {});

}  // namespace lteaudio
