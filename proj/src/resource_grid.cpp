#include "lteaudio/resource_grid.hpp"

#include <stdexcept>

#include <fmt/format.h>

#include "lteaudio/pss.hpp"

namespace lteaudio {

ResourceGrid::ResourceGrid(const Numerology& num, int subframe_index)
    : n_sc_(num.n_active_sc),
      n_sym_(num.symbols_per_subframe()),
      subframe_(subframe_index),
      cells_(static_cast<std::size_t>(n_sc_) * n_sym_) {}

int pss_subcarrier(const Numerology& num, int n) { return num.n_active_sc / 2 - 31 + n; }

bool is_pdsch(const Numerology& num, int subframe_index, int /*subcarrier*/, int symbol) {
    return !(subframe_index == 0 && symbol == num.pss_symbol());
}

ResourceGrid grid_map(std::span<const cf64> symbols, const Numerology& num, int subframe_index, int nid2) {
    const int expected = available_pdsch_re(num, subframe_index);
    if (static_cast<int>(symbols.size()) != expected)
        throw std::invalid_argument(fmt::format("grid_map: subframe {} takes {} symbols, got {}", subframe_index,
                                                expected, symbols.size()));
    ResourceGrid grid(num, subframe_index);
    std::size_t next = 0;
    for (int sym = 0; sym < grid.n_symbols(); ++sym) {
        if (!is_pdsch(num, subframe_index, 0, sym)) continue;
        for (int sc = 0; sc < grid.n_subcarriers(); ++sc) grid.at(sc, sym) = symbols[next++];
    }
    if (subframe_index == 0) {
        const auto pss = pss_generate(nid2);
        for (int n = 0; n < 62; ++n) grid.at(pss_subcarrier(num, n), num.pss_symbol()) = pss.values[n];
    }
    return grid;
}

ComplexVec grid_demap(const ResourceGrid& grid, const Numerology& num, int subframe_index) {
    if (grid.n_subcarriers() != num.n_active_sc || grid.n_symbols() != num.symbols_per_subframe())
        throw std::invalid_argument("grid_demap: grid shape does not match numerology");
    ComplexVec out;
    out.reserve(available_pdsch_re(num, subframe_index));
    for (int sym = 0; sym < grid.n_symbols(); ++sym) {
        if (!is_pdsch(num, subframe_index, 0, sym)) continue;
        for (int sc = 0; sc < grid.n_subcarriers(); ++sc) out.push_back(grid.at(sc, sym));
    }
    return out;
}

}  // namespace lteaudio
