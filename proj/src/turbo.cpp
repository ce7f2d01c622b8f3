#include "lteaudio/turbo.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <stdexcept>
#include <string>

namespace lteaudio {

namespace {

constexpr int kStates = 8;
constexpr double kNegInf = -1e300;

// State bits: s0 = a[k-1], s1 = a[k-2], s2 = a[k-3].
struct Trellis {
    std::array<std::array<int, 2>, kStates> next{};
    std::array<std::array<Bit, 2>, kStates> parity{};
    std::array<Bit, kStates> tail_input{};  // input that drives the feedback to zero

    Trellis() {
        for (int s = 0; s < kStates; ++s) {
            const int s0 = s & 1, s1 = (s >> 1) & 1, s2 = (s >> 2) & 1;
            for (int u = 0; u < 2; ++u) {
                const int a = u ^ s1 ^ s2;
                next[s][u] = a | (s0 << 1) | (s1 << 2);
                parity[s][u] = static_cast<Bit>(a ^ s0 ^ s2);
            }
            tail_input[s] = static_cast<Bit>(s1 ^ s2);
        }
    }
};

const Trellis& trellis() {
    static const Trellis t;
    return t;
}

struct RscOutput {
    Bits parity;
    std::array<Bit, 3> tail_sys{};
    std::array<Bit, 3> tail_par{};
};

RscOutput rsc_encode(std::span<const Bit> in) {
    const auto& t = trellis();
    RscOutput out;
    out.parity.resize(in.size());
    int s = 0;
    for (std::size_t k = 0; k < in.size(); ++k) {
        const int u = in[k] & 1;
        out.parity[k] = t.parity[s][u];
        s = t.next[s][u];
    }
    for (int k = 0; k < 3; ++k) {
        const int u = t.tail_input[s];
        out.tail_sys[k] = static_cast<Bit>(u);
        out.tail_par[k] = t.parity[s][u];
        s = t.next[s][u];
    }
    return out;
}

struct ConstituentLlrs {
    std::vector<double> sys;  // K
    std::vector<double> par;  // K
    std::array<double, 3> tail_sys{};
    std::array<double, 3> tail_par{};
};

// Max-log-MAP over one terminated constituent trellis. Returns the
// a-posteriori LLR of each of the K information bits.
std::vector<double> max_log_map(const ConstituentLlrs& ch, std::span<const double> apriori,
                                std::vector<double>& alpha, std::vector<double>& beta) {
    const auto& t = trellis();
    const int K = static_cast<int>(ch.sys.size());
    const int steps = K + 3;
    alpha.assign(static_cast<std::size_t>(steps + 1) * kStates, kNegInf);
    beta.assign(static_cast<std::size_t>(steps + 1) * kStates, kNegInf);

    auto gamma = [&](int k, int s, int u) {
        const int p = t.parity[s][u];
        if (k < K) return 0.5 * ((u ? -1.0 : 1.0) * (ch.sys[k] + apriori[k]) + (p ? -1.0 : 1.0) * ch.par[k]);
        return 0.5 * ((u ? -1.0 : 1.0) * ch.tail_sys[k - K] + (p ? -1.0 : 1.0) * ch.tail_par[k - K]);
    };
    auto allowed = [&](int k, int s, int u) { return k < K || u == t.tail_input[s]; };

    alpha[0] = 0.0;
    for (int k = 0; k < steps; ++k) {
        const double* a = &alpha[static_cast<std::size_t>(k) * kStates];
        double* an = &alpha[static_cast<std::size_t>(k + 1) * kStates];
        for (int s = 0; s < kStates; ++s) {
            if (a[s] <= kNegInf) continue;
            for (int u = 0; u < 2; ++u) {
                if (!allowed(k, s, u)) continue;
                const int ns = t.next[s][u];
                an[ns] = std::max(an[ns], a[s] + gamma(k, s, u));
            }
        }
        const double m = *std::max_element(an, an + kStates);
        for (int s = 0; s < kStates; ++s)
            if (an[s] > kNegInf) an[s] -= m;
    }

    beta[static_cast<std::size_t>(steps) * kStates] = 0.0;
    for (int k = steps - 1; k >= 0; --k) {
        const double* bn = &beta[static_cast<std::size_t>(k + 1) * kStates];
        double* b = &beta[static_cast<std::size_t>(k) * kStates];
        for (int s = 0; s < kStates; ++s) {
            for (int u = 0; u < 2; ++u) {
                if (!allowed(k, s, u)) continue;
                const int ns = t.next[s][u];
                if (bn[ns] <= kNegInf) continue;
                b[s] = std::max(b[s], bn[ns] + gamma(k, s, u));
            }
        }
        const double m = *std::max_element(b, b + kStates);
        for (int s = 0; s < kStates; ++s)
            if (b[s] > kNegInf) b[s] -= m;
    }

    std::vector<double> llr(K);
    for (int k = 0; k < K; ++k) {
        const double* a = &alpha[static_cast<std::size_t>(k) * kStates];
        const double* bn = &beta[static_cast<std::size_t>(k + 1) * kStates];
        double best[2] = {kNegInf, kNegInf};
        for (int s = 0; s < kStates; ++s) {
            if (a[s] <= kNegInf) continue;
            for (int u = 0; u < 2; ++u) {
                const int ns = t.next[s][u];
                if (bn[ns] <= kNegInf) continue;
                best[u] = std::max(best[u], a[s] + gamma(k, s, u) + bn[ns]);
            }
        }
        llr[k] = best[0] - best[1];
    }
    return llr;
}

void check_length(const QppParams& qpp, std::size_t n, const char* what, std::size_t expected) {
    if (n != expected)
        throw std::invalid_argument(std::string(what) + ": got " + std::to_string(n) + " values, expected " +
                                    std::to_string(expected) + " for K=" + std::to_string(qpp.K));
}

}  // namespace

Bits CodedBlock::concatenated() const {
    Bits out;
    out.reserve(systematic.size() + parity1.size() + parity2.size());
    out.insert(out.end(), systematic.begin(), systematic.end());
    out.insert(out.end(), parity1.begin(), parity1.end());
    out.insert(out.end(), parity2.begin(), parity2.end());
    return out;
}

CodedBlock CodedBlock::from_concatenated(std::span<const Bit> bits) {
    if (bits.size() % 3 != 0 || bits.size() < 3 * (8 + kTurboTailBits))
        throw std::invalid_argument("CodedBlock: length " + std::to_string(bits.size()) + " is not 3K+12");
    const std::size_t n = bits.size() / 3;
    return CodedBlock{Bits(bits.begin(), bits.begin() + n), Bits(bits.begin() + n, bits.begin() + 2 * n),
                      Bits(bits.begin() + 2 * n, bits.end())};
}

CodedBlock turbo_encode(const QppParams& qpp, std::span<const Bit> bits) {
    check_length(qpp, bits.size(), "turbo_encode", static_cast<std::size_t>(qpp.K));
    const int K = qpp.K;
    const Bits interleaved = qpp_interleave<Bit>(qpp, bits);
    const RscOutput e1 = rsc_encode(bits);
    const RscOutput e2 = rsc_encode(interleaved);

    CodedBlock c;
    c.systematic.assign(bits.begin(), bits.end());
    c.parity1 = e1.parity;
    c.parity2 = e2.parity;
    c.systematic.resize(K + kTurboTailBits);
    c.parity1.resize(K + kTurboTailBits);
    c.parity2.resize(K + kTurboTailBits);

    c.systematic[K] = e1.tail_sys[0];
    c.parity1[K] = e1.tail_par[0];
    c.parity2[K] = e1.tail_sys[1];
    c.systematic[K + 1] = e1.tail_par[1];
    c.parity1[K + 1] = e1.tail_sys[2];
    c.parity2[K + 1] = e1.tail_par[2];

    c.systematic[K + 2] = e2.tail_sys[0];
    c.parity1[K + 2] = e2.tail_par[0];
    c.parity2[K + 2] = e2.tail_sys[1];
    c.systematic[K + 3] = e2.tail_par[1];
    c.parity1[K + 3] = e2.tail_sys[2];
    c.parity2[K + 3] = e2.tail_par[2];
    return c;
}

TurboDecodeResult turbo_decode(const QppParams& qpp, std::span<const double> llrs, int max_iterations,
                               double extrinsic_scale, const EarlyStop& early_stop) {
    const int K = qpp.K;
    check_length(qpp, llrs.size(), "turbo_decode", 3 * static_cast<std::size_t>(K) + 12);
    if (max_iterations < 1) throw std::invalid_argument("turbo_decode: max_iterations must be >= 1");

    const std::size_t n = K + kTurboTailBits;
    const auto d0 = llrs.subspan(0, n);
    const auto d1 = llrs.subspan(n, n);
    const auto d2 = llrs.subspan(2 * n, n);

    ConstituentLlrs c1, c2;
    c1.sys.assign(d0.begin(), d0.begin() + K);
    c1.par.assign(d1.begin(), d1.begin() + K);
    c1.tail_sys = {d0[K], d2[K], d1[K + 1]};
    c1.tail_par = {d1[K], d0[K + 1], d2[K + 1]};

    c2.sys = qpp_interleave<double>(qpp, c1.sys);
    c2.par.assign(d2.begin(), d2.begin() + K);
    c2.tail_sys = {d0[K + 2], d2[K + 2], d1[K + 3]};
    c2.tail_par = {d1[K + 2], d0[K + 3], d2[K + 3]};

    std::vector<double> alpha, beta;
    std::vector<double> apriori1(K, 0.0);
    std::vector<double> apriori2(K, 0.0);
    TurboDecodeResult result;
    result.bits.assign(K, 0);

    for (int it = 1; it <= max_iterations; ++it) {
        const auto l1 = max_log_map(c1, apriori1, alpha, beta);
        std::vector<double> ext1(K);
        for (int k = 0; k < K; ++k) ext1[k] = extrinsic_scale * (l1[k] - c1.sys[k] - apriori1[k]);
        apriori2 = qpp_interleave<double>(qpp, ext1);

        const auto l2 = max_log_map(c2, apriori2, alpha, beta);
        std::vector<double> ext2(K);
        for (int k = 0; k < K; ++k) ext2[k] = extrinsic_scale * (l2[k] - c2.sys[k] - apriori2[k]);
        apriori1 = qpp_deinterleave<double>(qpp, ext2);

        const auto posterior = qpp_deinterleave<double>(qpp, l2);
        for (int k = 0; k < K; ++k) result.bits[k] = posterior[k] >= 0.0 ? 0 : 1;
        result.iterations_used = it;
        if (early_stop && early_stop(result.bits)) break;
    }
    return result;
}

}  // namespace lteaudio
