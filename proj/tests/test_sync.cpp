#include <doctest.h>

#include <random>

#include "lteaudio/channel.hpp"
#include "lteaudio/fft.hpp"
#include "lteaudio/modulation.hpp"
#include "lteaudio/ofdm.hpp"
#include "lteaudio/resource_grid.hpp"
#include "lteaudio/sync.hpp"

using namespace lteaudio;

namespace {

ComplexVec random_frame(std::uint64_t seed, int nid2) {
    const auto& num = default_numerology();
    std::mt19937_64 rng(seed);
    ComplexVec out;
    for (int sf = 0; sf < 10; ++sf) {
        Bits bits(2 * available_pdsch_re(num, sf));
        for (auto& b : bits) b = static_cast<Bit>(rng() & 1);
        const auto s = ofdm_modulate(grid_map(modulate(bits, 2), num, sf, nid2), num);
        out.insert(out.end(), s.begin(), s.end());
    }
    return out;
}

ComplexVec delayed(const ComplexVec& x, std::size_t delay, std::size_t trailing) {
    ComplexVec out(delay, cf64{});
    out.insert(out.end(), x.begin(), x.end());
    out.resize(out.size() + trailing);
    return out;
}

}  // namespace

TEST_CASE("PSS replica") {
    const auto& num = default_numerology();
    CHECK_THROWS(pss_replica(3, num));
    for (int nid2 = 0; nid2 < 3; ++nid2) {
        const auto p = pss_replica(nid2, num);
        REQUIRE(p.size() == 128);
        const auto grid = grid_map(ComplexVec(936), num, 0, nid2);
        const auto sym = ofdm_symbol(grid, num, num.pss_symbol());
        double diff = 0;
        for (int n = 0; n < 128; ++n) diff = std::max(diff, std::abs(sym[n] - p[n]));
        CHECK(diff < 1e-12);

        const auto spec = fft_unitary(p);
        double total = 0, pss = 0;
        for (auto v : spec) total += std::norm(v);
        for (int k = 0; k < 62; ++k) pss += std::norm(spec[subcarrier_bin(num, pss_subcarrier(num, k))]);
        CHECK(total > 0);
        CHECK(pss / total >= 0.99);
        for (int n = 1; n < 128; ++n) CHECK(std::abs(p[n] - p[128 - n]) < 1e-12);
    }
}

TEST_CASE("replica embedded in silence") {
    const auto& num = default_numerology();
    for (int nid2 = 0; nid2 < 3; ++nid2) {
        ComplexVec capture(1000);
        const auto p = pss_replica(nid2, num);
        std::copy(p.begin(), p.end(), capture.begin() + 100);
        const auto d = correlate_detect(capture, num);
        REQUIRE(d.size() == 1);
        CHECK(d[0].offset == 100);
        CHECK(d[0].metric == doctest::Approx(1.0));
        CHECK(d[0].nid2 == nid2);
    }
    CHECK_THROWS(correlate_detect(ComplexVec(100), num));
    CHECK_THROWS(correlate_detect(ComplexVec(1000), num, 0.0));
    CHECK_THROWS(correlate_detect(ComplexVec(1000), num, 1.5));
}

TEST_CASE("noise alone rarely triggers a detection") {
    const auto& num = default_numerology();
    int false_alarms = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto noise = apply_awgn(ComplexVec(4000, cf64(1e-3, 0)), -60.0, seed);
        false_alarms += !correlate_detect(noise, num, 0.5).empty();
    }
    CHECK(false_alarms <= 1);
}

TEST_CASE("timing at 10 dB SNR") {
    const auto& num = default_numerology();
    int ok = 0, nid2_ok = 0;
    std::mt19937_64 rng(99);
    for (std::uint64_t trial = 0; trial < 100; ++trial) {
        const int nid2 = static_cast<int>(trial % 3);
        const std::size_t delay = 200 + rng() % 3000;
        const auto clean = delayed(random_frame(trial, nid2), delay, 500);
        const auto capture = apply_awgn(clean, 10.0, 1000 + trial);
        const auto d = correlate_detect(capture, num);
        if (d.empty()) continue;
        const auto expected = static_cast<std::ptrdiff_t>(delay + num.pss_offset_in_frame());
        ok += std::abs(static_cast<std::ptrdiff_t>(d[0].offset) - expected) <= 1;
        nid2_ok += d[0].nid2 == nid2;
    }
    CHECK(ok >= 99);
    CHECK(nid2_ok >= 99);
}

TEST_CASE("detection is scale invariant") {
    const auto& num = default_numerology();
    const auto capture = apply_awgn(delayed(random_frame(3, 1), 321, 100), 5.0, 8);
    ComplexVec scaled(capture);
    for (auto& v : scaled) v *= 3.7;
    const auto a = correlate_detect(capture, num);
    const auto b = correlate_detect(scaled, num);
    REQUIRE(!a.empty());
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].offset == b[i].offset);
        CHECK(a[i].nid2 == b[i].nid2);
        CHECK(a[i].metric == doctest::Approx(b[i].metric).epsilon(1e-9));
    }
    const auto corr = pss_correlation(capture, pss_replica(1, num));
    for (double m : corr) {
        CHECK(m >= 0.0);
        CHECK(m <= 1.0 + 1e-12);
    }
}

TEST_CASE("frame alignment") {
    const auto& num = default_numerology();
    const auto frame = random_frame(11, 2);
    for (std::size_t delay : {0, 1, 777, 5000}) {
        const auto capture = delayed(frame, delay, 0);
        const auto d = correlate_detect(capture, num);
        REQUIRE(!d.empty());
        CHECK(frame_start_of(d[0], num) == static_cast<std::ptrdiff_t>(delay));
        const auto aligned = frame_align(capture, d[0], num);
        CHECK(aligned.frame_start == delay);
        REQUIRE(aligned.subframes.size() == 10);
        for (int sf = 0; sf < 10; ++sf) {
            CHECK(std::equal(aligned.subframes[sf].begin(), aligned.subframes[sf].end(), frame.begin() + sf * 1920));
        }
    }

    const auto truncated = delayed(frame, 50, 0);
    const auto d = correlate_detect(truncated, num);
    REQUIRE(!d.empty());
    CHECK_THROWS(frame_align(std::span(truncated).first(truncated.size() - 10), d[0], num));

    ComplexVec two = delayed(frame, 300, 0);
    const auto second = random_frame(12, 2);
    two.insert(two.end(), second.begin(), second.end());
    auto dets = correlate_detect(two, num);
    REQUIRE(dets.size() == 2);
    std::sort(dets.begin(), dets.end(), [](const Detection& a, const Detection& b) { return a.offset < b.offset; });
    CHECK(dets[1].offset - dets[0].offset == 19200);
    const auto f1 = frame_align(two, dets[0], num);
    const auto f2 = frame_align(two, dets[1], num);
    CHECK(f1.frame_start == 300);
    CHECK(f2.frame_start == 19500);
    CHECK(std::equal(f2.subframes[0].begin(), f2.subframes[0].end(), second.begin()));
}

TEST_CASE("scalar gain correction") {
    const auto& num = default_numerology();
    std::mt19937_64 rng(4);
    Bits bits(2 * 936);
    for (auto& b : bits) b = static_cast<Bit>(rng() & 1);
    const auto grid = grid_map(modulate(bits, 2), num, 0, 1);

    CHECK(std::abs(estimate_pss_gain(grid, num, 1) - cf64(1, 0)) < 1e-12);
    const cf64 g = std::polar(2.0, std::numbers::pi / 4);
    auto scaled = grid;
    for (auto& c : scaled.cells()) c *= g;
    CHECK(std::abs(estimate_pss_gain(scaled, num, 1) - g) < 1e-12);
    const auto fixed = gain_phase_correct(scaled, num, 1);
    CHECK(std::abs(apply_gain(scaled, g).at(5, 0) - grid.at(5, 0)) < 1e-12);
    double worst = 0;
    for (std::size_t i = 0; i < grid.cells().size(); ++i) worst = std::max(worst, std::abs(fixed.cells()[i] - grid.cells()[i]));
    CHECK(worst <= 1e-9);

    CHECK_THROWS_WITH(gain_phase_correct(ResourceGrid(num, 0), num, 1), doctest::Contains("no PSS energy"));

    std::vector<double> mean_error;
    for (double snr : {0.0, 10.0, 20.0}) {
        double sum = 0;
        for (std::uint64_t t = 0; t < 200; ++t) {
            auto noisy = scaled;
            const auto cells = apply_awgn(noisy.cells(), snr, 500 + t);
            std::copy(cells.begin(), cells.end(), noisy.cells().begin());
            sum += std::abs(estimate_pss_gain(noisy, num, 1) - g);
        }
        mean_error.push_back(sum / 200);
    }
    CHECK(mean_error[0] > mean_error[1]);
    CHECK(mean_error[1] > mean_error[2]);
}

TEST_CASE("CP-based frequency offset estimate") {
    const auto& num = default_numerology();
    const auto frame = random_frame(21, 0);
    CHECK(std::abs(cfo_estimate_cp(frame, num)) <= 0.5);

    const double injected = 0.1 * num.subcarrier_spacing();
    CHECK(injected == doctest::Approx(9.375));
    const auto shifted = cfo_correct(frame, -injected, num.fs_baseband);
    const double est = cfo_estimate_cp(shifted, num);
    CHECK(std::abs(est - injected) <= 0.05 * injected);
    const auto noisy = apply_awgn(shifted, 10.0, 3);
    CHECK(std::abs(cfo_estimate_cp(noisy, num) - injected) <= 0.05 * injected);

    const auto restored = cfo_correct(shifted, injected, num.fs_baseband);
    double worst = 0;
    for (std::size_t i = 0; i < frame.size(); ++i) worst = std::max(worst, std::abs(restored[i] - frame[i]));
    CHECK(worst < 1e-9);

    // Beyond half a subcarrier the estimate wraps.
    const auto wrapped = cfo_correct(frame, -0.7 * num.subcarrier_spacing(), num.fs_baseband);
    CHECK(std::abs(cfo_estimate_cp(wrapped, num)) <= num.subcarrier_spacing() / 2);
    CHECK_THROWS(cfo_estimate_cp(ComplexVec(100), num));
}
