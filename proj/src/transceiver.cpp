#include "lteaudio/transceiver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lteaudio/bits.hpp"
#include "lteaudio/frontend.hpp"
#include "lteaudio/modulation.hpp"
#include "lteaudio/ofdm.hpp"
#include "lteaudio/rate_match.hpp"
#include "lteaudio/resource_grid.hpp"
#include "lteaudio/turbo.hpp"

namespace lteaudio {

namespace {

int subframe_count(const LinkSetup& s) {
    if (s.frames < 1) throw std::invalid_argument("frames must be >= 1");
    return s.frames * s.numerology.subframes_per_frame;
}

struct SubframeTx {
    Bits payload;
    Bits coded;  // rate-matched
    ComplexVec symbols;
};

std::vector<SubframeTx> encode_all(const LinkSetup& s) {
    const auto& mcs = s.mcs_table.at(s.mcs);
    const auto payloads = link_payloads(s);
    std::vector<SubframeTx> out;
    for (std::size_t k = 0; k < payloads.size(); ++k) {
        const int sf = static_cast<int>(k % s.numerology.subframes_per_frame);
        const int E = coded_bits_per_subframe(s.numerology, mcs, sf);
        SubframeTx tx;
        tx.payload = payloads[k];
        auto block = crc24_attach(tx.payload);
        auto coded = turbo_encode(s.qpp_table.at(static_cast<int>(block.size())), block);
        tx.coded = rate_match(coded, E);
        tx.symbols = modulate(tx.coded, mcs.modulation_order);
        out.push_back(std::move(tx));
    }
    return out;
}

}  // namespace

std::vector<Bits> link_payloads(const LinkSetup& s) {
    const auto& mcs = s.mcs_table.at(s.mcs);
    Prbs prbs(s.payload_seed);
    std::vector<Bits> out;
    const int n = subframe_count(s);
    for (int k = 0; k < n; ++k) {
        const int sf = k % s.numerology.subframes_per_frame;
        const int E = coded_bits_per_subframe(s.numerology, mcs, sf);
        out.push_back(prbs.take(static_cast<std::size_t>(select_code_block(E, mcs.target_rate, s.qpp_table) - kCrcLength)));
    }
    return out;
}

TxResult transmit(const LinkSetup& s) {
    TxResult result;
    const auto subframes = encode_all(s);
    result.subframes = static_cast<int>(subframes.size());
    for (std::size_t k = 0; k < subframes.size(); ++k) {
        const int sf = static_cast<int>(k % s.numerology.subframes_per_frame);
        auto grid = grid_map(subframes[k].symbols, s.numerology, sf, s.nid2);
        auto samples = ofdm_modulate(grid, s.numerology);
        result.baseband.insert(result.baseband.end(), samples.begin(), samples.end());
    }
    auto up = duc(result.baseband, s.numerology, default_frontend_filter(s.numerology));
    const auto pad = static_cast<std::size_t>(std::lround(s.silence_s * s.numerology.fs_audio));
    result.audio.assign(pad, 0.0);
    result.audio.insert(result.audio.end(), up.audio.begin(), up.audio.end());
    result.audio.insert(result.audio.end(), pad, 0.0);
    return result;
}

RxResult receive(std::span<const double> audio, const LinkSetup& s) {
    const auto& num = s.numerology;
    const auto& mcs = s.mcs_table.at(s.mcs);
    const auto baseband = ddc(audio, num, default_frontend_filter(num)).baseband;

    auto detections = correlate_detect(baseband, num, s.sync_threshold);
    std::erase_if(detections, [&](const Detection& d) { return frame_start_of(d, num) < 0; });
    if (detections.empty()) throw std::runtime_error("no PSS detected");
    // The earliest frame carrying the strongest sequence is frame 0.
    const int nid2 = detections.front().nid2;
    Detection first = detections.front();
    for (const auto& d : detections) {
        if (d.nid2 == nid2 && d.offset < first.offset) first = d;
    }

    RxResult result;
    result.detection = first;
    result.frame_start = static_cast<std::size_t>(frame_start_of(first, num));
    const auto reference = encode_all(s);
    const auto sub = static_cast<std::size_t>(num.subframe_samples());
    std::optional<cf64> gain;
    LinkReport report;
    for (std::size_t k = 0; k < reference.size(); ++k) {
        const auto& ref = reference[k];
        const int sf = static_cast<int>(k % num.subframes_per_frame);
        const auto start = result.frame_start + k * sub;
        if (start + sub > baseband.size()) {
            report = accumulate_ber(report, ref.payload.size(), ref.payload.size());
            report = accumulate_bler(report, false);
            ++report.lost_subframes;
            continue;
        }
        auto grid = std::move(
            ofdm_demodulate(std::span<const cf64>(baseband).subspan(start, sub), num, sf).front());
        if (sf == 0) {
            const auto g = estimate_pss_gain(grid, num, first.nid2);
            if (std::abs(g) < 1e-9) throw std::runtime_error("no PSS energy");
            gain = g;
        }
        if (gain) grid = apply_gain(grid, *gain);
        const auto symbols = grid_demap(grid, num, sf);
        report = accumulate_evm(report, ref.symbols, symbols);
        const auto raw = ber_count(ref.coded, demod_hard(symbols, mcs.modulation_order));
        report = accumulate_raw_ber(report, raw.errors, raw.total);

        const auto llrs = demod_soft(symbols, mcs.modulation_order, 1.0);
        const int K = static_cast<int>(ref.payload.size()) + kCrcLength;
        const auto decoded = turbo_decode(s.qpp_table.at(K), rate_dematch(llrs, K), kDefaultTurboIterations,
                                          kDefaultExtrinsicScale, [](std::span<const Bit> b) { return crc24_ok(b); });
        const auto check = crc24_check(decoded.bits);
        report = accumulate_bler(report, check.pass, check.payload.size());
        const auto e = ber_count(ref.payload, check.payload);
        report = accumulate_ber(report, e.errors, e.total);
        ++result.subframes_decoded;
    }
    report.duration_s = static_cast<double>(reference.size()) * num.subframe_duration();
    result.report = report;
    return result;
}

}  // namespace lteaudio
