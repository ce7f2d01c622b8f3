#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "lteaudio/channel.hpp"
#include "lteaudio/wav.hpp"

using namespace lteaudio;
namespace fs = std::filesystem;

namespace {

ComplexVec unit_power_qpsk(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    ComplexVec x(n);
    const double a = 1 / std::sqrt(2.0);
    for (auto& v : x) v = {rng() & 1 ? a : -a, rng() & 1 ? a : -a};
    return x;
}

fs::path temp_file(const std::string& name) { return fs::temp_directory_path() / ("lteaudio_test_" + name); }

std::vector<unsigned char> file_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("ideal channel") {
    const auto x = unit_power_qpsk(100, 1);
    CHECK(apply_ideal(x) == x);
    CHECK(apply_ideal(std::span<const cf64>{}).empty());
    const RealVec r{0.5, -0.25};
    CHECK(apply_ideal(r) == r);
}

TEST_CASE("channel spec validation") {
    ChannelSpec spec;
    CHECK_NOTHROW(spec.validate());
    spec.kind = ChannelKind::awgn;
    CHECK_THROWS(spec.validate());
    spec.snr_db = std::numeric_limits<double>::infinity();
    CHECK_THROWS(spec.validate());
    spec.snr_db = 10.0;
    CHECK_NOTHROW(spec.validate());
    spec.kind = ChannelKind::wav_in;
    CHECK_THROWS(spec.validate());
    spec.path = "x.wav";
    CHECK_NOTHROW(spec.validate());
}

TEST_CASE("AWGN noise statistics") {
    const auto x = unit_power_qpsk(100000, 2);
    const auto y = apply_awgn(x, 0.0, 42);
    double var = 0, var_i = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        var += std::norm(y[i] - x[i]);
        var_i += std::pow((y[i] - x[i]).real(), 2);
    }
    var /= x.size();
    var_i /= x.size();
    CHECK(std::abs(var - 1.0) <= 0.02);
    CHECK(std::abs(var_i - 0.5) <= 0.01);

    const auto z = apply_awgn(x, 10.0, 43);
    double ps = 0, pn = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        ps += std::norm(x[i]);
        pn += std::norm(z[i] - x[i]);
    }
    CHECK(std::abs(10 * std::log10(ps / pn) - 10.0) <= 0.2);

    RealVec real(100000);
    std::mt19937_64 rng(3);
    for (auto& v : real) v = rng() & 1 ? 2.0 : -2.0;
    const auto rr = apply_awgn(real, 0.0, 44);
    double rv = 0;
    for (std::size_t i = 0; i < real.size(); ++i) rv += std::pow(rr[i] - real[i], 2);
    CHECK(std::abs(rv / real.size() - 4.0) <= 0.08);

    CHECK_THROWS(apply_awgn(std::span<const cf64>{}, 10.0, 1));
    CHECK_THROWS(apply_awgn(x, std::numeric_limits<double>::infinity(), 1));
}

TEST_CASE("AWGN determinism and seed independence") {
    const auto x = unit_power_qpsk(100000, 4);
    CHECK(apply_awgn(x, 5.0, 7) == apply_awgn(x, 5.0, 7));
    const auto a = apply_awgn(x, 0.0, 7);
    const auto b = apply_awgn(x, 0.0, 8);
    double num = 0, ea = 0, eb = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double na = (a[i] - x[i]).real(), nb = (b[i] - x[i]).real();
        num += na * nb;
        ea += na * na;
        eb += nb * nb;
    }
    CHECK(std::abs(num / std::sqrt(ea * eb)) < 0.01);
    CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
    CHECK(derive_seed(1, 2, 3) != derive_seed(1, 2, 4));
    CHECK(derive_seed(1, 2, 3) != derive_seed(2, 1, 3));
}

TEST_CASE("WAV roundtrip") {
    const auto path = temp_file("roundtrip.wav");
    RealVec x(48000);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto& v : x) v = u(rng);
    x[0] = 1.0;
    x[1] = -1.0;
    x[2] = 0.0;
    wav_write(x, path.string());
    const auto y = wav_read(path.string());
    REQUIRE(y.size() == x.size());
    double worst = 0;
    for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(x[i] - y[i]));
    CHECK(worst <= 3.1e-5);
    CHECK(y[2] == 0.0);
    fs::remove(path);
}

TEST_CASE("WAV header layout") {
    const auto path = temp_file("header.wav");
    wav_write(RealVec{0.5, -0.5, 0.0}, path.string());
    const auto b = file_bytes(path);
    REQUIRE(b.size() == 44 + 6);
    auto u16 = [&](std::size_t o) { return b[o] | (b[o + 1] << 8); };
    auto u32 = [&](std::size_t o) { return static_cast<std::uint32_t>(u16(o) | (u16(o + 2) << 16)); };
    CHECK(std::string(b.begin(), b.begin() + 4) == "RIFF");
    CHECK(u32(4) == 36 + 6);
    CHECK(std::string(b.begin() + 8, b.begin() + 16) == "WAVEfmt ");
    CHECK(u32(16) == 16);
    CHECK(u16(20) == 1);
    CHECK(u16(22) == 1);
    CHECK(u32(24) == 48000);
    CHECK(u32(28) == 96000);
    CHECK(u16(32) == 2);
    CHECK(u16(34) == 16);
    CHECK(std::string(b.begin() + 36, b.begin() + 40) == "data");
    CHECK(u32(40) == 6);
    CHECK(u16(44) == 16384);
    CHECK(u16(46) == 0x10000 - 16384);
    fs::remove(path);
}

TEST_CASE("WAV errors") {
    const auto path = temp_file("bad.wav");
    CHECK_THROWS_AS(wav_write(RealVec{0.1, 1.5}, path.string()), WavError);

    wav_write(RealVec(100), path.string(), 44100);
    try {
        wav_read(path.string());
        FAIL("44.1 kHz file accepted");
    } catch (const WavError& e) {
        CHECK(std::string(e.what()).find("44100") != std::string::npos);
    }
    CHECK_NOTHROW(wav_read(path.string(), 44100));

    {
        std::ofstream out(path, std::ios::binary);
        out << "not a wav file at all, definitely not";
    }
    CHECK_THROWS_AS(wav_read(path.string()), WavError);
    fs::remove(path);
    CHECK_THROWS_AS(wav_read(path.string()), WavError);
}
