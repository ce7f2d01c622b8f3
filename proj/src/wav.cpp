#include "lteaudio/wav.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include <fmt/format.h>

namespace lteaudio {

namespace {

void put_u32(std::vector<std::uint8_t>& b, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) b.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}
void put_u16(std::vector<std::uint8_t>& b, std::uint16_t v) {
    b.push_back(static_cast<std::uint8_t>(v));
    b.push_back(static_cast<std::uint8_t>(v >> 8));
}
void put_tag(std::vector<std::uint8_t>& b, const char* tag) { b.insert(b.end(), tag, tag + 4); }

std::uint32_t get_u32(const std::uint8_t* p) {
    return p[0] | (p[1] << 8) | (p[2] << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}
std::uint16_t get_u16(const std::uint8_t* p) { return static_cast<std::uint16_t>(p[0] | (p[1] << 8)); }

}  // namespace

void wav_write(std::span<const double> samples, const std::string& path, int sample_rate) {
    std::vector<std::uint8_t> out;
    const std::uint32_t data_bytes = static_cast<std::uint32_t>(samples.size() * 2);
    out.reserve(44 + data_bytes);
    put_tag(out, "RIFF");
    put_u32(out, 36 + data_bytes);
    put_tag(out, "WAVE");
    put_tag(out, "fmt ");
    put_u32(out, 16);
    put_u16(out, 1);  // PCM
    put_u16(out, 1);  // mono
    put_u32(out, static_cast<std::uint32_t>(sample_rate));
    put_u32(out, static_cast<std::uint32_t>(sample_rate) * 2);
    put_u16(out, 2);   // block align
    put_u16(out, 16);  // bits per sample
    put_tag(out, "data");
    put_u32(out, data_bytes);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double x = samples[i];
        if (!(std::abs(x) <= 1.0))
            throw WavError(fmt::format("wav_write: sample {} = {} is clipped (|x| > 1)", i, x));
        const long q = std::clamp(std::lround(x * 32768.0), -32768L, 32767L);
        put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw WavError("cannot open for writing: " + path);
    f.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
    if (!f) throw WavError("write failed: " + path);
}

RealVec wav_read(const std::string& path, int expected_rate) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw WavError("cannot open: " + path);
    std::vector<std::uint8_t> buf((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    if (buf.size() < 12 || std::memcmp(buf.data(), "RIFF", 4) != 0 || std::memcmp(buf.data() + 8, "WAVE", 4) != 0)
        throw WavError(path + ": not a RIFF/WAVE file");

    bool have_fmt = false;
    std::size_t pos = 12;
    while (pos + 8 <= buf.size()) {
        const std::uint8_t* chunk = buf.data() + pos;
        const std::uint32_t size = get_u32(chunk + 4);
        const std::size_t body = pos + 8;
        if (body + size > buf.size()) throw WavError(path + ": truncated chunk");
        if (std::memcmp(chunk, "fmt ", 4) == 0) {
            if (size < 16) throw WavError(path + ": malformed fmt chunk");
            const std::uint8_t* p = buf.data() + body;
            const int format = get_u16(p);
            const int channels = get_u16(p + 2);
            const std::uint32_t rate = get_u32(p + 4);
            const int bits = get_u16(p + 14);
            if (format != 1) throw WavError(fmt::format("{}: unsupported format tag {} (PCM only)", path, format));
            if (channels != 1) throw WavError(fmt::format("{}: unsupported channel count {} (mono only)", path, channels));
            if (bits != 16) throw WavError(fmt::format("{}: unsupported sample width {} bits (16 only)", path, bits));
            if (static_cast<int>(rate) != expected_rate)
                throw WavError(fmt::format("{}: unsupported sample rate {} Hz (expected {} Hz)", path, rate, expected_rate));
            have_fmt = true;
        } else if (std::memcmp(chunk, "data", 4) == 0) {
            if (!have_fmt) throw WavError(path + ": data chunk before fmt chunk");
            if (size % 2 != 0) throw WavError(path + ": odd data chunk size");
            RealVec out(size / 2);
            for (std::size_t i = 0; i < out.size(); ++i)
                out[i] = static_cast<std::int16_t>(get_u16(buf.data() + body + 2 * i)) / 32768.0;
            return out;
        }
        pos = body + size + (size & 1u);
    }
    throw WavError(path + ": no data chunk");
}

}  // namespace lteaudio
