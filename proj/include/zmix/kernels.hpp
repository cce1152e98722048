#pragma once

#include <cstddef>
#include <span>

#include "zmix/matrix.hpp"
#include "zmix/zeta.hpp"

namespace zmix::kernels {

/// out = weights * x, one dense product. Accumulates in T; each output element is
/// summed over input rows in ascending index order, so SIMD and scalar paths agree.
/// `out` must already be shaped x.rows() x x.cols().
template <typename T>
void weighted_rows(const WeightMatrix& weights, const Matrix<T>& x, Matrix<T>& out);

/// out[p] = lambda * x[p] + (1 - lambda) * x[partner[p]].
template <typename T>
void pair_rows(const Matrix<T>& x, std::span<const std::size_t> partner, double lambda,
               Matrix<T>& out);

/// Name of the instruction set the kernels were compiled for ("avx512", "avx2", "scalar").
const char* isa_name() noexcept;

}  // namespace zmix::kernels
