// Unitary DFT backed by FFTW. Plans are cached per size; execution is
// safe from multiple threads.
#pragma once

#include <span>

#include "lteaudio/types.hpp"

namespace lteaudio {

/// X[k] = 1/sqrt(N) * sum_n x[n] e^{-j 2 pi k n / N}
ComplexVec fft_unitary(std::span<const cf64> x);
/// x[n] = 1/sqrt(N) * sum_k X[k] e^{+j 2 pi k n / N}
ComplexVec ifft_unitary(std::span<const cf64> x);

}  // namespace lteaudio
