// PRBS data source, CRC-24A and bit-error counting.
#pragma once

#include <cstdint>
#include <span>

#include "lteaudio/types.hpp"

namespace lteaudio {

/// Maximal-length PRBS from the x^23 + x^18 + 1 LFSR (period 2^23 - 1).
/// The stream is a pure function of the seed.
class Prbs {
public:
    static constexpr int kOrder = 23;

    explicit Prbs(std::uint64_t seed);

    Bit next();
    Bits take(std::size_t n_bits);
    std::uint32_t state() const { return state_; }

private:
    std::uint32_t state_;
};

Bits prbs_generate(std::uint64_t seed, std::size_t n_bits);

/// CRC-24A generator polynomial, x^24 included.
constexpr std::uint32_t kCrc24aPoly = 0x1864CFB;

/// Remainder of payload(x) * x^24 mod g(x), bits MSB first.
std::uint32_t crc24a(std::span<const Bit> bits);

/// Appends the 24 parity bits. Throws on empty payload.
Bits crc24_attach(std::span<const Bit> payload);

struct CrcCheck {
    Bits payload;
    bool pass = false;
};

/// Splits off the trailing 24 bits and verifies them. Throws when
/// the input is not longer than the CRC itself.
CrcCheck crc24_check(std::span<const Bit> bits);

/// True when the trailing 24 bits match, without copying the payload.
bool crc24_ok(std::span<const Bit> bits);

struct BitErrors {
    std::size_t errors = 0;
    std::size_t total = 0;
};

BitErrors ber_count(std::span<const Bit> reference, std::span<const Bit> received);

}  // namespace lteaudio
