#include "lteaudio/frontend.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

namespace lteaudio {

namespace {

cf64 carrier_phasor(const Numerology& num, std::uint64_t n, double sign) {
    const double cycles = std::fmod(num.carrier * static_cast<double>(n), num.fs_audio) / num.fs_audio;
    return std::polar(1.0, sign * 2.0 * std::numbers::pi * cycles);
}

}  // namespace

FirFilter default_frontend_filter(const Numerology& num) {
    return design_lowpass(kDefaultFilterCutoff, num.fs_audio, kDefaultFilterTaps);
}

void check_frontend_filter(const FirFilter& filter, const Numerology& num) {
    const double half_bw = num.occupied_bandwidth() / 2.0;
    if (filter.taps.empty() || filter.length() % 2 == 0)
        throw std::invalid_argument("front-end filter must have an odd number of taps");
    if (filter.cutoff < half_bw)
        throw std::invalid_argument(fmt::format("front-end filter cutoff {} Hz is below half the occupied band ({} Hz)",
                                                filter.cutoff, half_bw));
    if (num.carrier + filter.cutoff > num.fs_audio / 2.0 || num.carrier - filter.cutoff <= 0.0)
        throw std::invalid_argument(fmt::format("passband exceeds Nyquist: carrier {} Hz +/- cutoff {} Hz outside (0, {}) Hz",
                                                num.carrier, filter.cutoff, num.fs_audio / 2.0));
}

Upconverter::Upconverter(const Numerology& num, FirFilter filter)
    : num_(num), filter_(std::move(filter)), history_(filter_.taps.size()) {
    check_frontend_filter(filter_, num_);
}

void Upconverter::push(cf64 v, RealVec& out) {
    const std::size_t L = history_.size();
    history_[pos_] = v;
    cf64 acc{0.0, 0.0};
    std::size_t idx = pos_;
    for (std::size_t j = 0; j < L; ++j) {
        if (history_[idx] != cf64{}) acc += filter_.taps[j] * history_[idx];
        idx = idx == 0 ? L - 1 : idx - 1;
    }
    pos_ = (pos_ + 1) % L;
    acc *= static_cast<double>(num_.interp_factor);
    out.push_back((acc * carrier_phasor(num_, n_++, +1.0)).real());
}

RealVec Upconverter::process(std::span<const cf64> baseband) {
    RealVec out;
    out.reserve(baseband.size() * num_.interp_factor);
    for (const cf64& v : baseband) {
        push(v, out);
        for (int r = 1; r < num_.interp_factor; ++r) push(cf64{}, out);
    }
    return out;
}

RealVec Upconverter::flush() {
    RealVec out;
    for (int i = 0; i + 1 < filter_.length(); ++i) push(cf64{}, out);
    std::fill(history_.begin(), history_.end(), cf64{});
    return out;
}

Downconverter::Downconverter(const Numerology& num, FirFilter filter, int tx_group_delay)
    : num_(num), filter_(std::move(filter)), history_(filter_.taps.size()) {
    check_frontend_filter(filter_, num_);
    if (tx_group_delay < 0) throw std::invalid_argument("transmitter group delay must be non-negative");
    const int sum = tx_group_delay + filter_.group_delay();
    phase_ = sum % num_.interp_factor;
    total_delay_ = (sum - phase_) / num_.interp_factor;
}

void Downconverter::push(cf64 v, ComplexVec& out) {
    const std::size_t L = history_.size();
    history_[pos_] = v;
    const std::uint64_t n = n_++;
    if (n >= static_cast<std::uint64_t>(phase_) && (n - phase_) % num_.interp_factor == 0) {
        cf64 acc{0.0, 0.0};
        std::size_t idx = pos_;
        for (std::size_t j = 0; j < L; ++j) {
            acc += filter_.taps[j] * history_[idx];
            idx = idx == 0 ? L - 1 : idx - 1;
        }
        out.push_back(acc);
    }
    pos_ = (pos_ + 1) % L;
}

ComplexVec Downconverter::process(std::span<const double> audio) {
    ComplexVec out;
    out.reserve(audio.size() / num_.interp_factor + 1);
    for (double a : audio) push(2.0 * a * carrier_phasor(num_, n_, -1.0), out);
    return out;
}

ComplexVec Downconverter::flush() {
    ComplexVec out;
    for (int i = 0; i + 1 < filter_.length(); ++i) push(cf64{}, out);
    return out;
}

DucResult duc(std::span<const cf64> baseband, const Numerology& num, const FirFilter& filter) {
    Upconverter up(num, filter);
    DucResult r;
    r.group_delay = up.group_delay();
    if (baseband.empty()) return r;
    r.audio = up.process(baseband);
    const RealVec tail = up.flush();
    r.audio.insert(r.audio.end(), tail.begin(), tail.end());
    double peak = 0.0;
    for (double v : r.audio) peak = std::max(peak, std::abs(v));
    if (peak > 0.0) {
        r.gain = 0.9 / peak;
        for (auto& v : r.audio) v *= r.gain;
    }
    return r;
}

DdcResult ddc(std::span<const double> audio, const Numerology& num, const FirFilter& filter) {
    Downconverter down(num, filter, filter.group_delay());
    DdcResult r;
    r.group_delay = down.total_delay();
    if (audio.empty()) return r;
    r.baseband = down.process(audio);
    const ComplexVec tail = down.flush();
    r.baseband.insert(r.baseband.end(), tail.begin(), tail.end());
    return r;
}

}  // namespace lteaudio
