#include "lteaudio/ofdm.hpp"

#include <stdexcept>

#include <fmt/format.h>

#include "lteaudio/fft.hpp"

namespace lteaudio {

int subcarrier_bin(const Numerology& num, int subcarrier) {
    const int half = num.n_active_sc / 2;
    return subcarrier < half ? num.n_fft - half + subcarrier : subcarrier - half + 1;
}

ComplexVec ofdm_symbol(const ResourceGrid& grid, const Numerology& num, int symbol) {
    ComplexVec spectrum(num.n_fft);
    for (int sc = 0; sc < grid.n_subcarriers(); ++sc) spectrum[subcarrier_bin(num, sc)] = grid.at(sc, symbol);
    return ifft_unitary(spectrum);
}

ComplexVec ofdm_modulate(const ResourceGrid& grid, const Numerology& num) {
    if (grid.n_subcarriers() != num.n_active_sc || grid.n_symbols() != num.symbols_per_subframe())
        throw std::invalid_argument("ofdm_modulate: grid shape does not match numerology");
    ComplexVec out;
    out.reserve(num.subframe_samples());
    for (int sym = 0; sym < grid.n_symbols(); ++sym) {
        const ComplexVec body = ofdm_symbol(grid, num, sym);
        const int cp = num.cp_length(sym);
        out.insert(out.end(), body.end() - cp, body.end());
        out.insert(out.end(), body.begin(), body.end());
    }
    return out;
}

std::vector<ResourceGrid> ofdm_demodulate(std::span<const cf64> samples, const Numerology& num, int first_subframe) {
    const std::size_t per = num.subframe_samples();
    if (samples.size() % per != 0)
        throw std::invalid_argument(fmt::format("ofdm_demodulate: {} samples is not a whole number of {}-sample subframes",
                                                samples.size(), per));
    std::vector<ResourceGrid> grids;
    for (std::size_t base = 0; base < samples.size(); base += per) {
        const int index = (first_subframe + static_cast<int>(grids.size())) % num.subframes_per_frame;
        ResourceGrid grid(num, index);
        for (int sym = 0; sym < grid.n_symbols(); ++sym) {
            const std::size_t start = base + num.symbol_start(sym) + num.cp_length(sym);
            const ComplexVec spectrum = fft_unitary(samples.subspan(start, num.n_fft));
            for (int sc = 0; sc < grid.n_subcarriers(); ++sc) grid.at(sc, sym) = spectrum[subcarrier_bin(num, sc)];
        }
        grids.push_back(std::move(grid));
    }
    return grids;
}

}  // namespace lteaudio
