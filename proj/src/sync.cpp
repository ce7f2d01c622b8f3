#include "lteaudio/sync.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

#include "lteaudio/fft.hpp"
#include "lteaudio/ofdm.hpp"
#include "lteaudio/pss.hpp"

namespace lteaudio {

ComplexVec pss_replica(int nid2, const Numerology& num) {
    const auto pss = pss_generate(nid2);
    ComplexVec spectrum(num.n_fft);
    for (int n = 0; n < 62; ++n) spectrum[subcarrier_bin(num, pss_subcarrier(num, n))] = pss.values[n];
    return ifft_unitary(spectrum);
}

RealVec pss_correlation(std::span<const cf64> capture, std::span<const cf64> replica) {
    const std::size_t L = replica.size();
    if (L == 0 || capture.size() < L) return {};
    double ref_energy = 0.0;
    for (const auto& p : replica) ref_energy += std::norm(p);
    const double ref_norm = std::sqrt(ref_energy);

    RealVec metric(capture.size() - L + 1, 0.0);
    for (std::size_t k = 0; k < metric.size(); ++k) {
        cf64 acc{0.0, 0.0};
        double energy = 0.0;
        for (std::size_t n = 0; n < L; ++n) {
            const cf64 r = capture[k + n];
            acc += r * std::conj(replica[n]);
            energy += std::norm(r);
        }
        if (energy > 0.0) metric[k] = std::min(1.0, std::abs(acc) / (std::sqrt(energy) * ref_norm));
    }
    return metric;
}

std::vector<Detection> correlate_detect(std::span<const cf64> capture, const Numerology& num, double threshold) {
    if (!(threshold > 0.0 && threshold <= 1.0))
        throw std::invalid_argument(fmt::format("correlate_detect: threshold {} outside (0, 1]", threshold));
    if (capture.size() < static_cast<std::size_t>(num.n_fft))
        throw std::invalid_argument(fmt::format("correlate_detect: capture of {} samples is shorter than one symbol ({})",
                                                capture.size(), num.n_fft));
    std::vector<Detection> candidates;
    for (int nid2 = 0; nid2 < 3; ++nid2) {
        const RealVec c = pss_correlation(capture, pss_replica(nid2, num));
        for (std::size_t k = 0; k < c.size(); ++k) {
            if (c[k] < threshold) continue;
            const bool rising = k == 0 || c[k] > c[k - 1];
            const bool peak = k + 1 == c.size() || c[k] >= c[k + 1];
            if (rising && peak) candidates.push_back(Detection{k, c[k], nid2, std::nullopt});
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Detection& a, const Detection& b) {
        if (a.metric != b.metric) return a.metric > b.metric;
        if (a.nid2 != b.nid2) return a.nid2 < b.nid2;
        return a.offset < b.offset;
    });
    std::vector<Detection> kept;
    const std::size_t guard = num.n_fft / 2;
    for (const auto& d : candidates) {
        const bool near = std::any_of(kept.begin(), kept.end(), [&](const Detection& k) {
            return (d.offset > k.offset ? d.offset - k.offset : k.offset - d.offset) < guard;
        });
        if (!near) kept.push_back(d);
    }
    return kept;
}

std::ptrdiff_t frame_start_of(const Detection& detection, const Numerology& num) {
    return static_cast<std::ptrdiff_t>(detection.offset) - num.pss_offset_in_frame();
}

AlignedFrame frame_align(std::span<const cf64> capture, const Detection& detection, const Numerology& num) {
    const std::ptrdiff_t start = frame_start_of(detection, num);
    if (start < 0)
        throw std::invalid_argument(fmt::format("frame_align: PSS at {} implies a frame start before the capture", detection.offset));
    const std::size_t begin = static_cast<std::size_t>(start);
    if (begin + num.frame_samples() > capture.size())
        throw std::invalid_argument(fmt::format("frame_align: frame at {} needs {} samples, capture has {}", begin,
                                                num.frame_samples(), capture.size() - std::min(begin, capture.size())));
    AlignedFrame frame;
    frame.frame_start = begin;
    for (int sf = 0; sf < num.subframes_per_frame; ++sf) {
        const auto first = capture.begin() + begin + static_cast<std::size_t>(sf) * num.subframe_samples();
        frame.subframes.emplace_back(first, first + num.subframe_samples());
    }
    return frame;
}

cf64 estimate_pss_gain(const ResourceGrid& grid, const Numerology& num, int nid2) {
    const auto pss = pss_generate(nid2);
    cf64 cross{0.0, 0.0};
    double ref = 0.0;
    for (int n = 0; n < 62; ++n) {
        const cf64 rx = grid.at(pss_subcarrier(num, n), num.pss_symbol());
        cross += rx * std::conj(pss.values[n]);
        ref += std::norm(pss.values[n]);
    }
    return cross / ref;
}

ResourceGrid apply_gain(const ResourceGrid& grid, cf64 gain) {
    ResourceGrid out = grid;
    for (auto& c : out.cells()) c /= gain;
    return out;
}

ResourceGrid gain_phase_correct(const ResourceGrid& grid, const Numerology& num, int nid2) {
    const cf64 g = estimate_pss_gain(grid, num, nid2);
    if (std::abs(g) < 1e-9) throw std::runtime_error("no PSS energy");
    return apply_gain(grid, g);
}

double cfo_estimate_cp(std::span<const cf64> samples, const Numerology& num) {
    cf64 acc{0.0, 0.0};
    int symbols = 0;
    for (std::size_t base = 0;; base += num.subframe_samples()) {
        bool any = false;
        for (int sym = 0; sym < num.symbols_per_subframe(); ++sym) {
            const std::size_t start = base + num.symbol_start(sym);
            const int cp = num.cp_length(sym);
            if (start + cp + num.n_fft > samples.size()) break;
            for (int n = 0; n < cp; ++n) acc += std::conj(samples[start + n]) * samples[start + n + num.n_fft];
            ++symbols;
            any = true;
        }
        if (!any) break;
    }
    if (symbols == 0)
        throw std::invalid_argument("cfo_estimate_cp: need at least one OFDM symbol with its cyclic prefix");
    return std::arg(acc) / (2.0 * std::numbers::pi) * num.subcarrier_spacing();
}

ComplexVec cfo_correct(std::span<const cf64> samples, double cfo_hz, double fs, std::size_t start_index) {
    ComplexVec out(samples.begin(), samples.end());
    for (std::size_t n = 0; n < out.size(); ++n) {
        const double cycles = std::fmod(cfo_hz * static_cast<double>(start_index + n) / fs, 1.0);
        out[n] *= std::polar(1.0, -2.0 * std::numbers::pi * cycles);
    }
    return out;
}

}  // namespace lteaudio
