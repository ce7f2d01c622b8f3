#include <doctest.h>

#include <random>

#include "lteaudio/fft.hpp"
#include "lteaudio/fir.hpp"
#include "lteaudio/frontend.hpp"
#include "lteaudio/metrics.hpp"
#include "lteaudio/modulation.hpp"
#include "lteaudio/ofdm.hpp"
#include "lteaudio/resource_grid.hpp"

using namespace lteaudio;

namespace {

// One frame of random QPSK subframes at baseband, plus the PDSCH symbols
// that went into it.
struct Frame {
    ComplexVec samples;
    std::vector<ComplexVec> symbols;
};

Frame random_frame(std::uint64_t seed) {
    const auto& num = default_numerology();
    std::mt19937_64 rng(seed);
    Frame f;
    for (int sf = 0; sf < 10; ++sf) {
        Bits bits(2 * available_pdsch_re(num, sf));
        for (auto& b : bits) b = static_cast<Bit>(rng() & 1);
        f.symbols.push_back(modulate(bits, 2));
        const auto s = ofdm_modulate(grid_map(f.symbols.back(), num, sf, 0), num);
        f.samples.insert(f.samples.end(), s.begin(), s.end());
    }
    return f;
}

}  // namespace

TEST_CASE("lowpass design") {
    const auto f = design_lowpass(4500, 48000, 63);
    CHECK(f.length() == 63);
    CHECK(f.group_delay() == 31);
    CHECK(std::abs(f.dc_gain() - 1.0) <= 0.001);
    for (int i = 0; i < 63; ++i) CHECK(f.taps[i] == f.taps[62 - i]);
    CHECK(20 * std::log10(f.magnitude_response(2 * 4500, 48000)) <= -40.0);

    CHECK_THROWS(design_lowpass(4500, 48000, 64));
    CHECK_THROWS(design_lowpass(4500, 48000, 9));
    CHECK_THROWS(design_lowpass(0, 48000, 63));
    CHECK_THROWS(design_lowpass(24000, 48000, 63));
}

TEST_CASE("front-end filter must fit the band") {
    const auto& num = default_numerology();
    CHECK_NOTHROW(check_frontend_filter(default_frontend_filter(num), num));
    CHECK_THROWS(check_frontend_filter(design_lowpass(3000, 48000, 63), num));
    CHECK_THROWS(check_frontend_filter(design_lowpass(12500, 48000, 63), num));
    CHECK_THROWS(Upconverter(num, design_lowpass(3000, 48000, 63)));
}

TEST_CASE("zero in, zero out") {
    const auto& num = default_numerology();
    const auto filt = default_frontend_filter(num);
    const auto up = duc(ComplexVec(500), num, filt);
    CHECK(std::all_of(up.audio.begin(), up.audio.end(), [](double v) { return v == 0.0; }));
    const auto down = ddc(RealVec(2000), num, filt);
    CHECK(std::all_of(down.baseband.begin(), down.baseband.end(), [](cf64 v) { return v == cf64{}; }));
    CHECK(duc(ComplexVec{}, num, filt).audio.empty());
}

TEST_CASE("constant baseband becomes a carrier tone") {
    const auto& num = default_numerology();
    const auto filt = default_frontend_filter(num);
    const std::size_t n = 1200;
    const auto up = duc(ComplexVec(n, cf64(1, 0)), num, filt);
    CHECK(up.audio.size() == 4 * n + filt.length() - 1);
    double peak = 0;
    for (double v : up.audio) peak = std::max(peak, std::abs(v));
    CHECK(peak == doctest::Approx(0.9));

    ComplexVec window(up.audio.begin() + 200, up.audio.begin() + 200 + 4000);
    const auto spec = fft_unitary(window);
    std::size_t best = 0;
    for (std::size_t k = 1; k < spec.size() / 2; ++k) {
        if (std::abs(spec[k]) > std::abs(spec[best])) best = k;
    }
    CHECK(best * num.fs_audio / window.size() == doctest::Approx(12000.0));

    const auto down = ddc(up.audio, num, filt);
    CHECK(down.group_delay == 15);
    for (std::size_t i = 100; i < n - 100; ++i) {
        CHECK(std::abs(down.baseband[i] / up.gain - cf64(1, 0)) < 1e-3);
    }
}

TEST_CASE("loopback EVM and out-of-band rejection with the default filter") {
    const auto& num = default_numerology();
    const auto filt = default_frontend_filter(num);
    const auto frame = random_frame(17);
    const auto up = duc(frame.samples, num, filt);
    const auto down = ddc(up.audio, num, filt);
    REQUIRE(down.baseband.size() >= frame.samples.size() + down.group_delay);

    ComplexVec aligned(down.baseband.begin() + down.group_delay,
                       down.baseband.begin() + down.group_delay + frame.samples.size());
    for (auto& v : aligned) v /= up.gain;

    std::vector<cf64> ref, rx;
    const auto grids = ofdm_demodulate(aligned, num);
    for (int sf = 0; sf < 10; ++sf) {
        const auto got = grid_demap(grids[sf], num, sf);
        ref.insert(ref.end(), frame.symbols[sf].begin(), frame.symbols[sf].end());
        rx.insert(rx.end(), got.begin(), got.end());
    }
    const double e = evm(ref, rx);
    MESSAGE("loopback constellation EVM " << e << " dB");
    CHECK(e <= -30.0);
    CHECK(demod_hard(rx, 2) == demod_hard(ref, 2));

    ComplexVec audio(up.audio.begin(), up.audio.end());
    const auto spec = fft_unitary(audio);
    double in_band = 0, out_band = 0;
    for (std::size_t k = 0; k < spec.size(); ++k) {
        double f = k * num.fs_audio / spec.size();
        if (f > num.fs_audio / 2) f = num.fs_audio - f;
        const double d = std::abs(f - num.carrier);
        if (d <= num.occupied_bandwidth() / 2) in_band += std::norm(spec[k]);
        else if (d >= num.fs_baseband / 2) out_band += std::norm(spec[k]);
    }
    const double rejection = 10 * std::log10(in_band / out_band);
    MESSAGE("out-of-band rejection " << rejection << " dB");
    CHECK(rejection >= 35.0);
}

TEST_CASE("streaming conversion matches the batch path") {
    const auto& num = default_numerology();
    const auto filt = default_frontend_filter(num);
    const auto frame = random_frame(5);
    const auto batch = duc(frame.samples, num, filt);

    Upconverter up(num, filt);
    RealVec streamed;
    for (std::size_t start = 0; start < frame.samples.size(); start += 777) {
        const auto n = std::min<std::size_t>(777, frame.samples.size() - start);
        const auto part = up.process(std::span(frame.samples).subspan(start, n));
        streamed.insert(streamed.end(), part.begin(), part.end());
    }
    const auto tail = up.flush();
    streamed.insert(streamed.end(), tail.begin(), tail.end());
    REQUIRE(streamed.size() == batch.audio.size());
    double worst = 0;
    for (std::size_t i = 0; i < streamed.size(); ++i) worst = std::max(worst, std::abs(streamed[i] * batch.gain - batch.audio[i]));
    CHECK(worst < 1e-12);

    const auto batch_down = ddc(batch.audio, num, filt);
    Downconverter down(num, filt, filt.group_delay());
    CHECK(down.total_delay() == batch_down.group_delay);
    ComplexVec rx;
    for (std::size_t start = 0; start < batch.audio.size(); start += 1001) {
        const auto n = std::min<std::size_t>(1001, batch.audio.size() - start);
        const auto part = down.process(std::span(batch.audio).subspan(start, n));
        rx.insert(rx.end(), part.begin(), part.end());
    }
    const auto rtail = down.flush();
    rx.insert(rx.end(), rtail.begin(), rtail.end());
    REQUIRE(rx.size() == batch_down.baseband.size());
    worst = 0;
    for (std::size_t i = 0; i < rx.size(); ++i) worst = std::max(worst, std::abs(rx[i] - batch_down.baseband[i]));
    CHECK(worst < 1e-12);
}
