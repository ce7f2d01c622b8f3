// Subcarrier x OFDM-symbol lattice for one subframe, and the PDSCH / PSS
// mapping rules.
#pragma once

#include <span>

#include "lteaudio/numerology.hpp"
#include "lteaudio/types.hpp"

namespace lteaudio {

class ResourceGrid {
public:
    ResourceGrid() = default;
    ResourceGrid(const Numerology& num, int subframe_index);

    int n_subcarriers() const { return n_sc_; }
    int n_symbols() const { return n_sym_; }
    int subframe_index() const { return subframe_; }

    cf64& at(int subcarrier, int symbol) { return cells_[idx(subcarrier, symbol)]; }
    const cf64& at(int subcarrier, int symbol) const { return cells_[idx(subcarrier, symbol)]; }

    std::span<cf64> cells() { return cells_; }
    std::span<const cf64> cells() const { return cells_; }

    bool operator==(const ResourceGrid&) const = default;

private:
    std::size_t idx(int sc, int sym) const { return static_cast<std::size_t>(sym) * n_sc_ + sc; }

    int n_sc_ = 0;
    int n_sym_ = 0;
    int subframe_ = 0;
    ComplexVec cells_;  // symbol-major: all subcarriers of symbol 0 first
};

/// Grid subcarrier carrying PSS element n (0..61): the central 62 of the
/// active band.
int pss_subcarrier(const Numerology& num, int n);

/// False only for the PSS symbol of subframe 0.
bool is_pdsch(const Numerology& num, int subframe_index, int subcarrier, int symbol);

/// Frequency-first fill: all subcarriers of a symbol (lowest first) before
/// the next symbol. Subframe 0 also receives the PSS for `nid2`.
ResourceGrid grid_map(std::span<const cf64> symbols, const Numerology& num, int subframe_index, int nid2);

/// PDSCH cells in grid_map order.
ComplexVec grid_demap(const ResourceGrid& grid, const Numerology& num, int subframe_index);

}  // namespace lteaudio
