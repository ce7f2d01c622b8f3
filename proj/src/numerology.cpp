#include "lteaudio/numerology.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "lteaudio/qpp.hpp"

namespace lteaudio {

namespace bundled {
std::string_view mcs_table_text();
}

namespace {

void require(bool cond, const char* what) {
    if (!cond) throw std::invalid_argument(fmt::format("numerology: {}", what));
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

int parse_int(std::string_view s, int line) {
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw std::invalid_argument(fmt::format("mcs table line {}: '{}' is not an integer", line, s));
    return v;
}

CodeRate parse_rate(std::string_view s, int line) {
    const auto slash = s.find('/');
    if (slash == std::string_view::npos)
        throw std::invalid_argument(fmt::format("mcs table line {}: rate '{}' must be a fraction n/d", line, s));
    return CodeRate{parse_int(trim(s.substr(0, slash)), line), parse_int(trim(s.substr(slash + 1)), line)};
}

}  // namespace

int Numerology::slot_samples() const {
    return symbols_per_slot * n_fft + cp_first + (symbols_per_slot - 1) * cp_rest;
}

int Numerology::cp_length(int symbol_in_subframe) const {
    return symbol_in_subframe % symbols_per_slot == 0 ? cp_first : cp_rest;
}

int Numerology::symbol_start(int symbol_in_subframe) const {
    const int slot = symbol_in_subframe / symbols_per_slot;
    const int l = symbol_in_subframe % symbols_per_slot;
    int offset = slot * slot_samples();
    if (l > 0) offset += cp_first + n_fft + (l - 1) * (cp_rest + n_fft);
    return offset;
}

void Numerology::validate() const {
    require(n_fft > 0 && (n_fft & (n_fft - 1)) == 0, "n_fft must be a power of two");
    require(n_rb > 0 && sc_per_rb > 0, "resource block shape must be positive");
    require(n_active_sc == n_rb * sc_per_rb, "n_active_sc must equal n_rb * sc_per_rb");
    require(n_active_sc < n_fft, "active subcarriers must leave room for DC");
    require(n_active_sc % 2 == 0, "active subcarriers must split evenly around DC");
    require(n_active_sc >= 62, "at least 62 active subcarriers are needed for the PSS");
    require(symbols_per_slot >= 2 && slots_per_subframe >= 1 && subframes_per_frame >= 1,
            "frame shape must be positive");
    require(cp_first >= 0 && cp_rest >= 0 && cp_first < n_fft && cp_rest < n_fft, "invalid cyclic prefix");
    require(fs_baseband > 0 && interp_factor >= 1, "invalid sample rates");
    require(std::abs(fs_audio - fs_baseband * interp_factor) < 1e-9, "fs_audio must equal fs_baseband * interp_factor");
    const double half_bw = occupied_bandwidth() / 2.0;
    require(carrier - half_bw > 0.0 && carrier + half_bw < fs_audio / 2.0,
            "occupied passband must lie strictly inside (0, fs_audio/2)");
}

const Numerology& default_numerology() {
    static const Numerology num = [] {
        Numerology n;
        n.validate();
        return n;
    }();
    return num;
}

McsTable::McsTable(std::vector<McsEntry> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw std::invalid_argument("mcs table is empty");
    std::sort(entries_.begin(), entries_.end(),
              [](const McsEntry& a, const McsEntry& b) { return a.index < b.index; });
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto& e = entries_[i];
        if (e.index != static_cast<int>(i))
            throw std::invalid_argument(fmt::format("mcs indices must be unique and contiguous from 0 (found {} at position {})", e.index, i));
        if (e.modulation_order != 2 && e.modulation_order != 4 && e.modulation_order != 6)
            throw std::invalid_argument(fmt::format("mcs {}: modulation order {} not in {{2,4,6}}", e.index, e.modulation_order));
        const auto& r = e.target_rate;
        // 1/3 <= num/den < 1
        if (r.den <= 0 || r.num <= 0 || 3LL * r.num < r.den || r.num >= r.den)
            throw std::invalid_argument(fmt::format("mcs {}: rate {}/{} outside [1/3, 1)", e.index, r.num, r.den));
    }
}

McsTable McsTable::parse(std::string_view text) {
    std::vector<McsEntry> entries;
    int line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw std::invalid_argument(fmt::format("mcs table line {}: expected 'key = value'", line_no));
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key.substr(0, 4) != "mcs.")
            throw std::invalid_argument(fmt::format("mcs table line {}: unknown key '{}'", line_no, key));
        McsEntry e;
        e.index = parse_int(key.substr(4), line_no);
        const auto sp = value.find_first_of(" \t");
        if (sp == std::string_view::npos)
            throw std::invalid_argument(fmt::format("mcs table line {}: expected '<order> <rate>'", line_no));
        e.modulation_order = parse_int(trim(value.substr(0, sp)), line_no);
        e.target_rate = parse_rate(trim(value.substr(sp + 1)), line_no);
        entries.push_back(e);
    }
    return McsTable(std::move(entries));
}

McsTable McsTable::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open mcs table: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

const McsEntry& McsTable::at(int index) const {
    if (index < 0 || index >= static_cast<int>(entries_.size()))
        throw std::out_of_range(fmt::format("unknown MCS index {}", index));
    return entries_[index];
}

const McsTable& default_mcs_table() {
    static const McsTable table = McsTable::parse(bundled::mcs_table_text());
    return table;
}

int available_pdsch_re(const Numerology& num, int subframe_index) {
    if (subframe_index < 0 || subframe_index >= num.subframes_per_frame)
        throw std::out_of_range(fmt::format("subframe index {} outside [0, {})", subframe_index, num.subframes_per_frame));
    const int symbols = num.symbols_per_subframe() - (subframe_index == 0 ? 1 : 0);
    return symbols * num.n_active_sc;
}

int coded_bits_per_subframe(const Numerology& num, const McsEntry& mcs, int subframe_index) {
    return available_pdsch_re(num, subframe_index) * mcs.modulation_order;
}

int select_code_block(int coded_bits, CodeRate rate, const QppTable& qpp) {
    const long long limit = static_cast<long long>(coded_bits) * rate.num / rate.den;
    int best = 0;
    for (const auto& e : qpp.entries()) {
        if (e.K <= limit) best = e.K;
        else break;
    }
    if (best == 0)
        throw InfeasibleMcs(fmt::format("MCS infeasible for this grid: floor({} * {}/{}) = {} is below the smallest block size {}",
                                        coded_bits, rate.num, rate.den, limit, qpp.min_size()));
    return best;
}

}  // namespace lteaudio
