// Link-quality accounting. LinkReport stores raw counts so that reports
// from independent runs merge exactly.
#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "lteaudio/types.hpp"

namespace lteaudio {

constexpr double kEvmFloorDb = -120.0;

struct LinkReport {
    std::uint64_t bit_errors = 0;
    std::uint64_t bits_total = 0;
    std::uint64_t blocks_failed = 0;
    std::uint64_t blocks_total = 0;
    std::uint64_t passed_payload_bits = 0;  // payload bits of CRC-pass blocks
    std::uint64_t raw_bit_errors = 0;       // pre-FEC hard decisions
    std::uint64_t raw_bits_total = 0;
    std::uint64_t lost_subframes = 0;
    double evm_error_energy = 0.0;
    double evm_reference_energy = 0.0;
    double duration_s = 0.0;
    std::optional<double> snr_db;

    double ber() const;
    double bler() const;
    double raw_ber() const;
    double evm_db() const;
    double throughput_bps() const;

    bool operator==(const LinkReport&) const = default;
};

/// Pooled ratio update. Throws when total is zero.
LinkReport accumulate_ber(LinkReport report, std::uint64_t errors, std::uint64_t total);
LinkReport accumulate_raw_ber(LinkReport report, std::uint64_t errors, std::uint64_t total);
/// `payload_bits` feeds the throughput numerator when the block passed.
LinkReport accumulate_bler(LinkReport report, bool crc_pass, std::uint64_t payload_bits = 0);
LinkReport accumulate_evm(LinkReport report, std::span<const cf64> reference, std::span<const cf64> received);

/// Commutative and associative with LinkReport{} as identity. Reports
/// with different SNRs merge to a NaN SNR.
LinkReport merge(const LinkReport& a, const LinkReport& b);

/// 10 log10(sum |rx-ref|^2 / sum |ref|^2), floored at -120 dB.
double evm(std::span<const cf64> reference, std::span<const cf64> received);

/// Es/N0 that corresponds to a given Eb/N0 for `bits_per_symbol` coded bits
/// carrying `code_rate` information bits each.
double esn0_from_ebn0(double ebn0_db, int bits_per_symbol, double code_rate = 1.0);

/// Gaussian tail probability.
double q_function(double x);

}  // namespace lteaudio
