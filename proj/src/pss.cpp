#include "lteaudio/pss.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace lteaudio {

int pss_root(int nid2) {
    switch (nid2) {
        case 0: return 25;
        case 1: return 29;
        case 2: return 34;
        default: throw std::invalid_argument("invalid nid2 " + std::to_string(nid2) + " (expected 0, 1 or 2)");
    }
}

PssSequence pss_generate(int nid2) {
    PssSequence p;
    p.nid2 = nid2;
    p.root = pss_root(nid2);
    for (int n = 0; n < 62; ++n) {
        // Exponents reduced mod 126 keep the phase argument small.
        const long long m = n < 31 ? static_cast<long long>(n) * (n + 1) : static_cast<long long>(n + 1) * (n + 2);
        const long long e = (p.root * m) % 126;
        p.values[n] = std::polar(1.0, -std::numbers::pi * static_cast<double>(e) / 63.0);
    }
    return p;
}

}  // namespace lteaudio
