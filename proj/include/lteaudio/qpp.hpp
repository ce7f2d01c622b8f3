// Quadratic permutation polynomial (QPP) turbo interleaver.
#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lteaudio/types.hpp"

namespace lteaudio {

struct QppParams {
    int K = 40;
    int f1 = 3;
    int f2 = 10;

    /// Source index read by output position i: (f1*i + f2*i^2) mod K.
    int index(int i) const {
        const long long ii = i;
        return static_cast<int>((f1 * ii + f2 * ((ii * ii) % K)) % K);
    }

    bool is_bijective() const;
};

/// Sorted set of supported block sizes. Every entry is verified to be a
/// permutation of [0, K) on construction.
class QppTable {
public:
    explicit QppTable(std::vector<QppParams> entries);

    /// One "K f1 f2" triple per line, '#' comments. Errors carry the line number.
    static QppTable parse(std::string_view text);
    static QppTable load(const std::string& path);

    const QppParams& at(int K) const;
    bool contains(int K) const;
    const std::vector<QppParams>& entries() const { return entries_; }
    int min_size() const { return entries_.front().K; }
    int max_size() const { return entries_.back().K; }

private:
    std::vector<QppParams> entries_;
};

/// Table bundled with the library (3GPP turbo interleaver parameters).
const QppTable& default_qpp_table();

template <typename T>
std::vector<T> qpp_interleave(const QppParams& p, std::span<const T> in) {
    if (static_cast<int>(in.size()) != p.K)
        throw std::invalid_argument("qpp_interleave: length " + std::to_string(in.size()) +
                                    " does not match K=" + std::to_string(p.K));
    std::vector<T> out(in.size());
    for (int i = 0; i < p.K; ++i) out[i] = in[p.index(i)];
    return out;
}

template <typename T>
std::vector<T> qpp_deinterleave(const QppParams& p, std::span<const T> in) {
    if (static_cast<int>(in.size()) != p.K)
        throw std::invalid_argument("qpp_deinterleave: length " + std::to_string(in.size()) +
                                    " does not match K=" + std::to_string(p.K));
    std::vector<T> out(in.size());
    for (int i = 0; i < p.K; ++i) out[p.index(i)] = in[i];
    return out;
}

}  // namespace lteaudio
