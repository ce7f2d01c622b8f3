#include "lteaudio/rate_match.hpp"

#include <stdexcept>
#include <string>

namespace lteaudio {

Bits rate_match(std::span<const Bit> concatenated, int coded_bits) {
    if (coded_bits < 1) throw std::invalid_argument("rate_match: E must be >= 1");
    if (concatenated.empty()) throw std::invalid_argument("rate_match: empty coded block");
    Bits out(coded_bits);
    const std::size_t n = concatenated.size();
    for (int j = 0; j < coded_bits; ++j) out[j] = concatenated[j % n];
    return out;
}

Bits rate_match(const CodedBlock& coded, int coded_bits) {
    return rate_match(coded.concatenated(), coded_bits);
}

Llrs rate_dematch(std::span<const double> llrs, int K) {
    if (llrs.empty()) throw std::invalid_argument("rate_dematch: E must be >= 1");
    if (K < 1) throw std::invalid_argument("rate_dematch: K must be >= 1, got " + std::to_string(K));
    const std::size_t n = 3 * static_cast<std::size_t>(K) + 12;
    Llrs out(n, 0.0);
    for (std::size_t j = 0; j < llrs.size(); ++j) out[j % n] += llrs[j];
    return out;
}

}  // namespace lteaudio
