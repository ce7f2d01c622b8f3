// Primary synchronization signal: length-63 Zadoff-Chu with the middle
// element punctured.
#pragma once

#include <array>

#include "lteaudio/types.hpp"

namespace lteaudio {

struct PssSequence {
    int nid2 = 0;
    int root = 25;
    std::array<cf64, 62> values{};
};

/// nid2 0 -> 25, 1 -> 29, 2 -> 34.
int pss_root(int nid2);
PssSequence pss_generate(int nid2);

}  // namespace lteaudio
