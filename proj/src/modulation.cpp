#include "lteaudio/modulation.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace lteaudio {

namespace {

// Per-axis PAM levels. Square Gray QAM is separable: even-numbered bits
// (b0, b2, b4) drive I, odd-numbered bits drive Q.
struct AxisTable {
    int bits = 1;                     // bits per axis
    std::array<double, 8> level{};    // indexed by axis label (first axis bit = MSB)
};

void check_order(int order) {
    if (order != 2 && order != 4 && order != 6)
        throw std::invalid_argument("modulation order must be 2, 4 or 6, got " + std::to_string(order));
}

double unscaled_level(int order, int label) {
    const int m = order / 2;
    auto bit = [&](int j) { return (label >> (m - 1 - j)) & 1; };
    const double s0 = 1 - 2 * bit(0);
    if (m == 1) return s0;
    if (m == 2) return s0 * (2 - (1 - 2 * bit(1)));
    return s0 * (4 - (1 - 2 * bit(1)) * (2 - (1 - 2 * bit(2))));
}

const AxisTable& axis_table(int order) {
    static const std::array<AxisTable, 3> tables = [] {
        std::array<AxisTable, 3> t{};
        const double norm[3] = {std::sqrt(2.0), std::sqrt(10.0), std::sqrt(42.0)};
        for (int i = 0; i < 3; ++i) {
            const int order = 2 * (i + 1);
            t[i].bits = order / 2;
            for (int label = 0; label < (1 << t[i].bits); ++label)
                t[i].level[label] = unscaled_level(order, label) / norm[i];
        }
        return t;
    }();
    check_order(order);
    return tables[order / 2 - 1];
}

// Squared distance from y to the nearest level with axis bit j equal to 0 and 1.
void axis_min_distances(const AxisTable& t, double y, int j, double& d0, double& d1) {
    d0 = d1 = std::numeric_limits<double>::infinity();
    for (int label = 0; label < (1 << t.bits); ++label) {
        const double d = (y - t.level[label]) * (y - t.level[label]);
        if ((label >> (t.bits - 1 - j)) & 1) d1 = std::min(d1, d);
        else d0 = std::min(d0, d);
    }
}

}  // namespace

ComplexVec constellation(int order) {
    const auto& t = axis_table(order);
    ComplexVec pts(1u << order);
    for (int label = 0; label < (1 << order); ++label) {
        int i_label = 0, q_label = 0;
        for (int j = 0; j < t.bits; ++j) {
            i_label = (i_label << 1) | ((label >> (order - 1 - 2 * j)) & 1);
            q_label = (q_label << 1) | ((label >> (order - 2 - 2 * j)) & 1);
        }
        pts[label] = {t.level[i_label], t.level[q_label]};
    }
    return pts;
}

ComplexVec modulate(std::span<const Bit> bits, int order) {
    const auto& t = axis_table(order);
    if (bits.size() % order != 0)
        throw std::invalid_argument("modulate: " + std::to_string(bits.size()) + " bits not divisible by order " +
                                    std::to_string(order));
    ComplexVec out(bits.size() / order);
    for (std::size_t s = 0; s < out.size(); ++s) {
        const Bit* b = &bits[s * order];
        int i_label = 0, q_label = 0;
        for (int j = 0; j < t.bits; ++j) {
            i_label = (i_label << 1) | (b[2 * j] & 1);
            q_label = (q_label << 1) | (b[2 * j + 1] & 1);
        }
        out[s] = {t.level[i_label], t.level[q_label]};
    }
    return out;
}

Bits demod_hard(std::span<const cf64> symbols, int order) {
    const auto& t = axis_table(order);
    Bits out(symbols.size() * order);
    for (std::size_t s = 0; s < symbols.size(); ++s) {
        for (int j = 0; j < t.bits; ++j) {
            double d0, d1;
            axis_min_distances(t, symbols[s].real(), j, d0, d1);
            out[s * order + 2 * j] = d1 < d0 ? 1 : 0;
            axis_min_distances(t, symbols[s].imag(), j, d0, d1);
            out[s * order + 2 * j + 1] = d1 < d0 ? 1 : 0;
        }
    }
    return out;
}

Llrs demod_soft(std::span<const cf64> symbols, int order, double noise_variance) {
    const auto& t = axis_table(order);
    if (!(noise_variance > 0.0)) throw std::invalid_argument("demod_soft: noise variance must be positive");
    Llrs out(symbols.size() * order);
    const double inv = 1.0 / noise_variance;
    for (std::size_t s = 0; s < symbols.size(); ++s) {
        for (int j = 0; j < t.bits; ++j) {
            double d0, d1;
            axis_min_distances(t, symbols[s].real(), j, d0, d1);
            out[s * order + 2 * j] = (d1 - d0) * inv;
            axis_min_distances(t, symbols[s].imag(), j, d0, d1);
            out[s * order + 2 * j + 1] = (d1 - d0) * inv;
        }
    }
    return out;
}

}  // namespace lteaudio
