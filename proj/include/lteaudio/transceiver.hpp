// Whole-file transmitter and receiver for the WAV round trip. These run the
// same coded chain as full_awgn.app without the dataflow runtime.
#pragma once

#include <cstdint>
#include <vector>

#include "lteaudio/fir.hpp"
#include "lteaudio/metrics.hpp"
#include "lteaudio/numerology.hpp"
#include "lteaudio/qpp.hpp"
#include "lteaudio/sync.hpp"
#include "lteaudio/types.hpp"

namespace lteaudio {

struct LinkSetup {
    Numerology numerology = default_numerology();
    McsTable mcs_table = default_mcs_table();
    QppTable qpp_table = default_qpp_table();
    int mcs = 0;
    int nid2 = 0;
    int frames = 1;
    std::uint64_t payload_seed = 1;
    double silence_s = 0.1;  // leading and trailing silence on transmit
    double sync_threshold = kDefaultSyncThreshold;
};

/// PRBS payloads (CRC excluded) for every subframe of the transmission.
std::vector<Bits> link_payloads(const LinkSetup& setup);

struct TxResult {
    RealVec audio;        // peak 0.9, ready for wav_write
    ComplexVec baseband;  // before the DUC
    int subframes = 0;
};

TxResult transmit(const LinkSetup& setup);

struct RxResult {
    LinkReport report;
    Detection detection;
    std::size_t frame_start = 0;  // in baseband samples after the DDC
    int subframes_decoded = 0;
};

/// DDC, PSS acquisition, then per-subframe decode against the regenerated
/// payloads. Throws std::runtime_error("no PSS detected") when nothing
/// crosses the threshold.
RxResult receive(std::span<const double> audio, const LinkSetup& setup);

}  // namespace lteaudio
