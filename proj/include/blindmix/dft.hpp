#pragma once

#include "blindmix/types.hpp"

namespace blindmix {

/// Unitary DFT, X[j] = (1/sqrt(n)) * sum_k x[k] exp(-2*pi*i*j*k/n).
CVec dft_unitary(const CVec& x);

/// Unitary inverse DFT (adjoint of dft_unitary).
CVec idft_unitary(const CVec& x);

}  // namespace blindmix
