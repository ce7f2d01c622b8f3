#include "lteaudio/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace lteaudio {

double LinkReport::ber() const {
    return bits_total == 0 ? 0.0 : static_cast<double>(bit_errors) / static_cast<double>(bits_total);
}

double LinkReport::bler() const {
    return blocks_total == 0 ? 0.0 : static_cast<double>(blocks_failed) / static_cast<double>(blocks_total);
}

double LinkReport::raw_ber() const {
    return raw_bits_total == 0 ? 0.0 : static_cast<double>(raw_bit_errors) / static_cast<double>(raw_bits_total);
}

double LinkReport::evm_db() const {
    if (evm_reference_energy <= 0.0 || evm_error_energy <= 0.0) return kEvmFloorDb;
    return std::max(kEvmFloorDb, 10.0 * std::log10(evm_error_energy / evm_reference_energy));
}

double LinkReport::throughput_bps() const {
    return duration_s > 0.0 ? static_cast<double>(passed_payload_bits) / duration_s : 0.0;
}

LinkReport accumulate_ber(LinkReport report, std::uint64_t errors, std::uint64_t total) {
    if (total == 0) throw std::invalid_argument("accumulate_ber: total must be positive");
    if (errors > total) throw std::invalid_argument("accumulate_ber: more errors than bits");
    report.bit_errors += errors;
    report.bits_total += total;
    return report;
}

LinkReport accumulate_raw_ber(LinkReport report, std::uint64_t errors, std::uint64_t total) {
    if (total == 0) throw std::invalid_argument("accumulate_raw_ber: total must be positive");
    if (errors > total) throw std::invalid_argument("accumulate_raw_ber: more errors than bits");
    report.raw_bit_errors += errors;
    report.raw_bits_total += total;
    return report;
}

LinkReport accumulate_bler(LinkReport report, bool crc_pass, std::uint64_t payload_bits) {
    report.blocks_total += 1;
    if (crc_pass) report.passed_payload_bits += payload_bits;
    else report.blocks_failed += 1;
    return report;
}

LinkReport accumulate_evm(LinkReport report, std::span<const cf64> reference, std::span<const cf64> received) {
    if (reference.size() != received.size())
        throw std::invalid_argument("evm: length mismatch (" + std::to_string(reference.size()) + " vs " +
                                    std::to_string(received.size()) + ")");
    for (std::size_t i = 0; i < reference.size(); ++i) {
        report.evm_error_energy += std::norm(received[i] - reference[i]);
        report.evm_reference_energy += std::norm(reference[i]);
    }
    return report;
}

LinkReport merge(const LinkReport& a, const LinkReport& b) {
    LinkReport r;
    r.bit_errors = a.bit_errors + b.bit_errors;
    r.bits_total = a.bits_total + b.bits_total;
    r.blocks_failed = a.blocks_failed + b.blocks_failed;
    r.blocks_total = a.blocks_total + b.blocks_total;
    r.passed_payload_bits = a.passed_payload_bits + b.passed_payload_bits;
    r.raw_bit_errors = a.raw_bit_errors + b.raw_bit_errors;
    r.raw_bits_total = a.raw_bits_total + b.raw_bits_total;
    r.lost_subframes = a.lost_subframes + b.lost_subframes;
    r.evm_error_energy = a.evm_error_energy + b.evm_error_energy;
    r.evm_reference_energy = a.evm_reference_energy + b.evm_reference_energy;
    r.duration_s = a.duration_s + b.duration_s;
    // Absent is the identity; disagreeing values collapse to NaN, which absorbs.
    if (!a.snr_db) r.snr_db = b.snr_db;
    else if (!b.snr_db || *a.snr_db == *b.snr_db) r.snr_db = a.snr_db;
    else r.snr_db = std::nan("");
    return r;
}

double evm(std::span<const cf64> reference, std::span<const cf64> received) {
    const LinkReport r = accumulate_evm(LinkReport{}, reference, received);
    if (r.evm_reference_energy <= 0.0) throw std::invalid_argument("evm: reference has zero power");
    return r.evm_db();
}

double esn0_from_ebn0(double ebn0_db, int bits_per_symbol, double code_rate) {
    return ebn0_db + 10.0 * std::log10(bits_per_symbol * code_rate);
}

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

}  // namespace lteaudio
