// Frame-structure constants of the audio-scaled 1.4 MHz LTE mode and the
// MCS / code-block sizing rules built on top of them.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lteaudio {

class QppTable;

/// Sample counts follow LTE 1.4 MHz exactly (128-point FFT, CP 10/9,
/// 960-sample slot); only the clock is scaled so that the x4-interpolated
/// passband fits a 48 kHz sound card.
struct Numerology {
    int n_fft = 128;
    int n_active_sc = 72;  // DC excluded
    int n_rb = 6;
    int sc_per_rb = 12;
    int symbols_per_slot = 7;
    int slots_per_subframe = 2;
    int subframes_per_frame = 10;
    int cp_first = 10;
    int cp_rest = 9;
    double fs_baseband = 12000.0;
    int interp_factor = 4;
    double fs_audio = 48000.0;
    double carrier = 12000.0;

    /// Throws std::invalid_argument naming the first violated invariant.
    void validate() const;

    int symbols_per_subframe() const { return symbols_per_slot * slots_per_subframe; }
    int slot_samples() const;
    int subframe_samples() const { return slot_samples() * slots_per_subframe; }
    int frame_samples() const { return subframe_samples() * subframes_per_frame; }
    int cp_length(int symbol_in_subframe) const;
    /// Offset of the CP of a symbol from the start of its subframe.
    int symbol_start(int symbol_in_subframe) const;
    /// Symbol (within subframe 0) that carries the PSS: last symbol of slot 0.
    int pss_symbol() const { return symbols_per_slot - 1; }
    /// Offset from frame start to the first useful (post-CP) PSS sample.
    int pss_offset_in_frame() const { return symbol_start(pss_symbol()) + cp_length(pss_symbol()); }
    double subcarrier_spacing() const { return fs_baseband / n_fft; }
    double occupied_bandwidth() const { return n_active_sc * subcarrier_spacing(); }
    double subframe_duration() const { return subframe_samples() / fs_baseband; }
};

/// Returns the shipped default numerology (already validated).
const Numerology& default_numerology();

/// Code rates are kept as exact fractions so that floor(E * rate) never
/// loses a bit to rounding.
struct CodeRate {
    int num = 1;
    int den = 3;
    double value() const { return static_cast<double>(num) / den; }
};

struct McsEntry {
    int index = 0;
    int modulation_order = 2;  // bits per symbol: 2, 4 or 6
    CodeRate target_rate;
};

class McsTable {
public:
    McsTable() = default;
    /// Validates: contiguous indices from 0, orders in {2,4,6}, 1/3 <= rate < 1.
    explicit McsTable(std::vector<McsEntry> entries);

    /// Parses `mcs.<index> = <order> <rate>` lines; '#' starts a comment.
    static McsTable parse(std::string_view text);
    static McsTable load(const std::string& path);

    const McsEntry& at(int index) const;
    std::size_t size() const { return entries_.size(); }
    const std::vector<McsEntry>& entries() const { return entries_; }

private:
    std::vector<McsEntry> entries_;
};

/// {QPSK,16QAM,64QAM} x {1/3,1/2}.
const McsTable& default_mcs_table();

/// PDSCH resource elements in one subframe. Subframe 0 loses the whole
/// PSS symbol.
int available_pdsch_re(const Numerology& num, int subframe_index);

/// E = available_pdsch_re * modulation order.
int coded_bits_per_subframe(const Numerology& num, const McsEntry& mcs, int subframe_index);

/// Thrown when no supported block size fits the requested grid capacity.
class InfeasibleMcs : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Largest supported interleaver size K with K <= floor(E * rate).
int select_code_block(int coded_bits, CodeRate rate, const QppTable& qpp);

constexpr int kCrcLength = 24;

}  // namespace lteaudio
