// Straight-line reference implementations used only by tests.
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

namespace oracle {

using cf = std::complex<double>;
using bits = std::vector<std::uint8_t>;

// CRC-24A remainder by polynomial long division over GF(2): append 24
// zeros and subtract the generator wherever the leading bit is set.
inline bits crc24a_long_division(const bits& msg) {
    static const int g[25] = {1, 1, 0, 0, 0, 0, 1, 1, 0, 0, 1, 0, 0, 1, 1, 0, 0, 1, 1, 1, 1, 1, 0, 1, 1};
    bits r(msg);
    r.resize(msg.size() + 24, 0);
    for (std::size_t i = 0; i < msg.size(); ++i) {
        if (!r[i]) continue;
        for (int j = 0; j < 25; ++j) r[i + j] ^= static_cast<std::uint8_t>(g[j]);
    }
    return bits(r.end() - 24, r.end());
}

struct TurboStreams {
    bits d0, d1, d2;
};

// One constituent encoder written directly from its polynomials:
// feedback 1 + D^2 + D^3, feedforward 1 + D + D^3. Registers r1..r3
// hold the feedback sequence delayed by 1..3.
struct Rsc {
    int r1 = 0, r2 = 0, r3 = 0;
    int step(int u, int& parity) {
        int fb = u ^ r2 ^ r3;
        parity = fb ^ r1 ^ r3;
        r3 = r2;
        r2 = r1;
        r1 = fb;
        return u;
    }
    // Termination input: the bit that drives the feedback sum to zero.
    int tail_input() const { return r2 ^ r3; }
};

inline TurboStreams turbo_encode(const bits& c, int f1, int f2) {
    const std::size_t K = c.size();
    bits cp(K);
    for (std::size_t i = 0; i < K; ++i) {
        std::uint64_t idx = (static_cast<std::uint64_t>(f1) * i + static_cast<std::uint64_t>(f2) * i % K * i) % K;
        cp[i] = c[idx];
    }
    Rsc a, b;
    bits x(K + 3), z(K + 3), xp(K + 3), zp(K + 3);
    for (std::size_t k = 0; k < K; ++k) {
        int p;
        x[k] = static_cast<std::uint8_t>(a.step(c[k], p));
        z[k] = static_cast<std::uint8_t>(p);
        xp[k] = static_cast<std::uint8_t>(b.step(cp[k], p));
        zp[k] = static_cast<std::uint8_t>(p);
    }
    for (std::size_t k = K; k < K + 3; ++k) {
        int p;
        x[k] = static_cast<std::uint8_t>(a.step(a.tail_input(), p));
        z[k] = static_cast<std::uint8_t>(p);
    }
    for (std::size_t k = K; k < K + 3; ++k) {
        int p;
        xp[k] = static_cast<std::uint8_t>(b.step(b.tail_input(), p));
        zp[k] = static_cast<std::uint8_t>(p);
    }
    TurboStreams s;
    s.d0.assign(x.begin(), x.begin() + K);
    s.d1.assign(z.begin(), z.begin() + K);
    s.d2.assign(zp.begin(), zp.begin() + K);
    const std::size_t k = K;
    s.d0.insert(s.d0.end(), {x[k], z[k + 1], xp[k], zp[k + 1]});
    s.d1.insert(s.d1.end(), {z[k], x[k + 2], zp[k], xp[k + 2]});
    s.d2.insert(s.d2.end(), {x[k + 1], z[k + 2], xp[k + 1], zp[k + 2]});
    return s;
}

// Constellation points listed per axis as in the LTE mapping tables:
// I is selected by bits (b0, b2, b4), Q by (b1, b3, b5).
inline std::vector<cf> constellation(int order) {
    std::vector<cf> pts(std::size_t{1} << order);
    for (std::size_t v = 0; v < pts.size(); ++v) {
        std::array<int, 6> b{};
        for (int i = 0; i < order; ++i) b[i] = static_cast<int>((v >> (order - 1 - i)) & 1);
        double re = 0, im = 0, scale = 1;
        if (order == 2) {
            static const double ax[2] = {1, -1};
            re = ax[b[0]];
            im = ax[b[1]];
            scale = std::sqrt(2.0);
        } else if (order == 4) {
            static const double ax[4] = {1, 3, -1, -3};  // index b_hi*2 + b_lo
            re = ax[b[0] * 2 + b[2]];
            im = ax[b[1] * 2 + b[3]];
            scale = std::sqrt(10.0);
        } else {
            static const double ax[8] = {3, 1, 5, 7, -3, -1, -5, -7};
            re = ax[b[0] * 4 + b[2] * 2 + b[4]];
            im = ax[b[1] * 4 + b[3] * 2 + b[5]];
            scale = std::sqrt(42.0);
        }
        pts[v] = cf(re, im) / scale;
    }
    return pts;
}

inline bits nearest_point_bits(cf s, int order) {
    const auto pts = constellation(order);
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t v = 0; v < pts.size(); ++v) {
        double d = std::norm(s - pts[v]);
        if (d < best_d) {
            best_d = d;
            best = v;
        }
    }
    bits out(order);
    for (int i = 0; i < order; ++i) out[i] = static_cast<std::uint8_t>((best >> (order - 1 - i)) & 1);
    return out;
}

inline std::vector<double> maxlog_llrs(cf s, int order, double noise_variance) {
    const auto pts = constellation(order);
    std::vector<double> out(order);
    for (int i = 0; i < order; ++i) {
        double d0 = std::numeric_limits<double>::infinity(), d1 = d0;
        for (std::size_t v = 0; v < pts.size(); ++v) {
            double d = std::norm(s - pts[v]);
            if ((v >> (order - 1 - i)) & 1) {
                d1 = std::min(d1, d);
            } else {
                d0 = std::min(d0, d);
            }
        }
        out[i] = (d1 - d0) / noise_variance;
    }
    return out;
}

inline std::vector<cf> zadoff_chu_pss(int u) {
    std::vector<cf> d(62);
    const double pi = std::numbers::pi;
    for (int n = 0; n < 31; ++n) d[n] = std::exp(cf(0, -pi * u * n * (n + 1) / 63.0));
    for (int n = 31; n < 62; ++n) d[n] = std::exp(cf(0, -pi * u * (n + 1) * (n + 2) / 63.0));
    return d;
}

inline std::vector<cf> dft(const std::vector<cf>& x, bool inverse) {
    const std::size_t N = x.size();
    std::vector<cf> X(N);
    const double sign = inverse ? 1.0 : -1.0;
    for (std::size_t k = 0; k < N; ++k) {
        cf acc = 0;
        for (std::size_t n = 0; n < N; ++n) {
            acc += x[n] * std::polar(1.0, sign * 2.0 * std::numbers::pi * static_cast<double>(k * n % N) / N);
        }
        X[k] = acc / std::sqrt(static_cast<double>(N));
    }
    return X;
}

// Gaussian tail by composite Simpson integration of the density on
// [x, x + 12].
inline double q_integral(double x) {
    const int n = 20000;
    const double a = x, b = x + 12.0, h = (b - a) / n;
    auto f = [](double t) { return std::exp(-t * t / 2) / std::sqrt(2 * std::numbers::pi); };
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4 : 2);
    return s * h / 3;
}

}  // namespace oracle
