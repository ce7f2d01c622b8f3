#include "lteaudio/qpp.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace lteaudio {

namespace bundled {
std::string_view qpp_table_text();
}

bool QppParams::is_bijective() const {
    if (K <= 0) return false;
    std::vector<bool> seen(K, false);
    for (int i = 0; i < K; ++i) {
        const int j = index(i);
        if (j < 0 || seen[j]) return false;
        seen[j] = true;
    }
    return true;
}

QppTable::QppTable(std::vector<QppParams> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw std::invalid_argument("qpp table is empty");
    std::sort(entries_.begin(), entries_.end(), [](const QppParams& a, const QppParams& b) { return a.K < b.K; });
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto& e = entries_[i];
        if (i > 0 && entries_[i - 1].K == e.K)
            throw std::invalid_argument(fmt::format("qpp table: duplicate K={}", e.K));
        if (e.K < 8 || e.f1 < 0 || e.f2 < 0)
            throw std::invalid_argument(fmt::format("qpp table: invalid entry K={} f1={} f2={}", e.K, e.f1, e.f2));
        if (!e.is_bijective())
            throw std::invalid_argument(fmt::format("qpp table: (f1={}, f2={}) is not a permutation for K={}", e.f1, e.f2, e.K));
    }
}

QppTable QppTable::parse(std::string_view text) {
    std::vector<QppParams> entries;
    int line_no = 0;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::istringstream fields(line);
        QppParams p;
        if (!(fields >> p.K)) {
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            throw std::invalid_argument(fmt::format("qpp table line {}: expected 'K f1 f2'", line_no));
        }
        std::string extra;
        if (!(fields >> p.f1 >> p.f2) || (fields >> extra))
            throw std::invalid_argument(fmt::format("qpp table line {}: expected 'K f1 f2'", line_no));
        if (!p.is_bijective())
            throw std::invalid_argument(fmt::format("qpp table line {}: (f1={}, f2={}) is not a permutation for K={}",
                                                    line_no, p.f1, p.f2, p.K));
        entries.push_back(p);
    }
    return QppTable(std::move(entries));
}

QppTable QppTable::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open qpp table: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

const QppParams& QppTable::at(int K) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), K,
                               [](const QppParams& p, int k) { return p.K < k; });
    if (it == entries_.end() || it->K != K)
        throw std::out_of_range(fmt::format("unsupported turbo block size K={}", K));
    return *it;
}

bool QppTable::contains(int K) const {
    return std::binary_search(entries_.begin(), entries_.end(), QppParams{K, 0, 0},
                              [](const QppParams& a, const QppParams& b) { return a.K < b.K; });
}

const QppTable& default_qpp_table() {
    static const QppTable table = QppTable::parse(bundled::qpp_table_text());
    return table;
}

}  // namespace lteaudio
