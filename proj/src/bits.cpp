#include "lteaudio/bits.hpp"

#include <stdexcept>
#include <string>

namespace lteaudio {

namespace {

constexpr std::uint32_t kPrbsMask = (1u << Prbs::kOrder) - 1;

// splitmix64 finaliser: spreads nearby seeds over the whole state space.
std::uint64_t mix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

}  // namespace

Prbs::Prbs(std::uint64_t seed) : state_(static_cast<std::uint32_t>(mix(seed)) & kPrbsMask) {
    if (state_ == 0) state_ = 1;
}

Bit Prbs::next() {
    // Fibonacci form: taps at stages 23 and 18.
    const Bit out = static_cast<Bit>((state_ >> 22) & 1u);
    const std::uint32_t fb = ((state_ >> 22) ^ (state_ >> 17)) & 1u;
    state_ = ((state_ << 1) | fb) & kPrbsMask;
    return out;
}

Bits Prbs::take(std::size_t n_bits) {
    Bits out(n_bits);
    for (auto& b : out) b = next();
    return out;
}

Bits prbs_generate(std::uint64_t seed, std::size_t n_bits) {
    Prbs prbs(seed);
    return prbs.take(n_bits);
}

std::uint32_t crc24a(std::span<const Bit> bits) {
    std::uint32_t reg = 0;
    for (Bit b : bits) {
        const std::uint32_t top = ((reg >> 23) & 1u) ^ (b & 1u);
        reg = (reg << 1) & 0xFFFFFFu;
        if (top) reg ^= kCrc24aPoly & 0xFFFFFFu;
    }
    return reg;
}

Bits crc24_attach(std::span<const Bit> payload) {
    if (payload.empty()) throw std::invalid_argument("crc24_attach: empty payload");
    Bits out(payload.begin(), payload.end());
    const std::uint32_t crc = crc24a(payload);
    for (int i = 23; i >= 0; --i) out.push_back(static_cast<Bit>((crc >> i) & 1u));
    return out;
}

bool crc24_ok(std::span<const Bit> bits) {
    if (bits.size() <= 24)
        throw std::invalid_argument("crc24_check: need more than 24 bits, got " + std::to_string(bits.size()));
    const auto payload = bits.first(bits.size() - 24);
    const std::uint32_t crc = crc24a(payload);
    for (int i = 0; i < 24; ++i) {
        if (((crc >> (23 - i)) & 1u) != (bits[payload.size() + i] & 1u)) return false;
    }
    return true;
}

CrcCheck crc24_check(std::span<const Bit> bits) {
    const bool pass = crc24_ok(bits);
    return CrcCheck{Bits(bits.begin(), bits.end() - 24), pass};
}

BitErrors ber_count(std::span<const Bit> reference, std::span<const Bit> received) {
    if (reference.size() != received.size())
        throw std::invalid_argument("ber_count: length mismatch (" + std::to_string(reference.size()) + " vs " +
                                    std::to_string(received.size()) + ")");
    BitErrors r{0, reference.size()};
    for (std::size_t i = 0; i < reference.size(); ++i) r.errors += (reference[i] & 1u) != (received[i] & 1u);
    return r;
}

}  // namespace lteaudio
