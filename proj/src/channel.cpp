#include "lteaudio/channel.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace lteaudio {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

double noise_variance(double power, double snr_db) {
    if (!std::isfinite(snr_db))
        throw std::invalid_argument("apply_awgn: SNR must be finite (use apply_ideal for a noiseless channel)");
    return power / std::pow(10.0, snr_db / 10.0);
}

}  // namespace

void ChannelSpec::validate() const {
    switch (kind) {
        case ChannelKind::ideal: break;
        case ChannelKind::awgn:
            if (!snr_db || !std::isfinite(*snr_db)) throw std::invalid_argument("awgn channel requires a finite snr_db");
            break;
        case ChannelKind::wav_out:
        case ChannelKind::wav_in:
            if (path.empty()) throw std::invalid_argument("wav channel requires a path");
            break;
    }
}

std::uint64_t derive_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return splitmix(splitmix(splitmix(a) ^ b) ^ c);
}

ComplexVec apply_ideal(std::span<const cf64> samples) { return ComplexVec(samples.begin(), samples.end()); }
RealVec apply_ideal(std::span<const double> samples) { return RealVec(samples.begin(), samples.end()); }

ComplexVec apply_awgn(std::span<const cf64> samples, double snr_db, std::uint64_t seed) {
    if (samples.empty()) throw std::invalid_argument("apply_awgn: empty input");
    double power = 0.0;
    for (const auto& s : samples) power += std::norm(s);
    power /= static_cast<double>(samples.size());
    const double sigma = std::sqrt(noise_variance(power, snr_db) / 2.0);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    ComplexVec out(samples.begin(), samples.end());
    for (auto& s : out) {
        const double i = gauss(rng);
        const double q = gauss(rng);
        s += cf64{sigma * i, sigma * q};
    }
    return out;
}

RealVec apply_awgn(std::span<const double> samples, double snr_db, std::uint64_t seed) {
    if (samples.empty()) throw std::invalid_argument("apply_awgn: empty input");
    double power = 0.0;
    for (double s : samples) power += s * s;
    power /= static_cast<double>(samples.size());
    const double sigma = std::sqrt(noise_variance(power, snr_db));
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    RealVec out(samples.begin(), samples.end());
    for (auto& s : out) s += sigma * gauss(rng);
    return out;
}

}  // namespace lteaudio
