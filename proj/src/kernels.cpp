#include "zmix/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>
#include <vector>

#if defined(__AVX512F__) || defined(__AVX2__)
#include <immintrin.h>
#endif

namespace zmix::kernels {

namespace {

// One SIMD register of T. The scalar fallback is a register of width 1.
template <typename T>
struct Lane;

#if defined(__AVX512F__)
template <>
struct Lane<float> {
  using reg = __m512;
  static constexpr std::size_t width = 16;
  static reg zero() { return _mm512_setzero_ps(); }
  static reg load(const float* p) { return _mm512_loadu_ps(p); }
  static void store(float* p, reg v) { _mm512_storeu_ps(p, v); }
  static reg splat(float v) { return _mm512_set1_ps(v); }
  static reg fma(reg a, reg b, reg c) { return _mm512_fmadd_ps(a, b, c); }
};
template <>
struct Lane<double> {
  using reg = __m512d;
  static constexpr std::size_t width = 8;
  static reg zero() { return _mm512_setzero_pd(); }
  static reg load(const double* p) { return _mm512_loadu_pd(p); }
  static void store(double* p, reg v) { _mm512_storeu_pd(p, v); }
  static reg splat(double v) { return _mm512_set1_pd(v); }
  static reg fma(reg a, reg b, reg c) { return _mm512_fmadd_pd(a, b, c); }
};
constexpr const char* kIsa = "avx512";
#elif defined(__AVX2__) && defined(__FMA__)
template <>
struct Lane<float> {
  using reg = __m256;
  static constexpr std::size_t width = 8;
  static reg zero() { return _mm256_setzero_ps(); }
  static reg load(const float* p) { return _mm256_loadu_ps(p); }
  static void store(float* p, reg v) { _mm256_storeu_ps(p, v); }
  static reg splat(float v) { return _mm256_set1_ps(v); }
  static reg fma(reg a, reg b, reg c) { return _mm256_fmadd_ps(a, b, c); }
};
template <>
struct Lane<double> {
  using reg = __m256d;
  static constexpr std::size_t width = 4;
  static reg zero() { return _mm256_setzero_pd(); }
  static reg load(const double* p) { return _mm256_loadu_pd(p); }
  static void store(double* p, reg v) { _mm256_storeu_pd(p, v); }
  static reg splat(double v) { return _mm256_set1_pd(v); }
  static reg fma(reg a, reg b, reg c) { return _mm256_fmadd_pd(a, b, c); }
};
constexpr const char* kIsa = "avx2";
#else
template <typename T>
struct Lane {
  using reg = T;
  static constexpr std::size_t width = 1;
  static reg zero() { return T{}; }
  static reg load(const T* p) { return *p; }
  static void store(T* p, reg v) { *p = v; }
  static reg splat(T v) { return v; }
#if defined(__FMA__)
  static reg fma(reg a, reg b, reg c) { return std::fma(a, b, c); }
#else
  static reg fma(reg a, reg b, reg c) { return a * b + c; }
#endif
};
constexpr const char* kIsa = "scalar";
#endif

// Columns per block. The n input rows of one block stay cache resident while every
// output tile consumes them; the first tile prefetches the next block.
constexpr std::size_t kBlock = 256;
// Output rows per micro-kernel tile; 2 * kTileRows accumulators must fit the register file.
#if defined(__AVX2__) && !defined(__AVX512F__)
constexpr std::size_t kTileRows = 6;
#else
constexpr std::size_t kTileRows = 8;
#endif

// Computes `Rows` output rows over `2 * width` columns starting at `src`.
template <typename T, std::size_t Rows>
inline void micro_tile(std::size_t n, const T* w, const T* src, std::size_t stride, T* out,
                       std::size_t out_stride, bool prefetch) {
  using L = Lane<T>;
  typename L::reg acc[Rows][2];
  for (std::size_t q = 0; q < Rows; ++q) acc[q][0] = acc[q][1] = L::zero();
#pragma GCC unroll 8
  for (std::size_t i = 0; i < n; ++i) {
    const T* row = src + i * stride;
    const auto x0 = L::load(row);
    const auto x1 = L::load(row + L::width);
    if (prefetch) {
      __builtin_prefetch(row + kBlock);
      __builtin_prefetch(row + kBlock + 64 / sizeof(T));
    }
    for (std::size_t q = 0; q < Rows; ++q) {
      const auto wq = L::splat(w[q * n + i]);
      acc[q][0] = L::fma(wq, x0, acc[q][0]);
      acc[q][1] = L::fma(wq, x1, acc[q][1]);
    }
  }
  for (std::size_t q = 0; q < Rows; ++q) {
    L::store(out + q * out_stride, acc[q][0]);
    L::store(out + q * out_stride + L::width, acc[q][1]);
  }
}

template <typename T>
void tile_dispatch(std::size_t rows, std::size_t n, const T* w, const T* src, std::size_t stride,
                   T* out, std::size_t out_stride, bool prefetch) {
  switch (rows) {
    case 8: micro_tile<T, 8>(n, w, src, stride, out, out_stride, prefetch); break;
    case 7: micro_tile<T, 7>(n, w, src, stride, out, out_stride, prefetch); break;
    case 6: micro_tile<T, 6>(n, w, src, stride, out, out_stride, prefetch); break;
    case 5: micro_tile<T, 5>(n, w, src, stride, out, out_stride, prefetch); break;
    case 4: micro_tile<T, 4>(n, w, src, stride, out, out_stride, prefetch); break;
    case 3: micro_tile<T, 3>(n, w, src, stride, out, out_stride, prefetch); break;
    case 2: micro_tile<T, 2>(n, w, src, stride, out, out_stride, prefetch); break;
    default: micro_tile<T, 1>(n, w, src, stride, out, out_stride, prefetch); break;
  }
}

}  // namespace

template <typename T>
void weighted_rows(const WeightMatrix& weights, const Matrix<T>& x, Matrix<T>& out) {
  using L = Lane<T>;
  static_assert(kBlock % (2 * L::width) == 0);
  constexpr std::size_t kStep = 2 * L::width;

  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  if (weights.rows() != n || weights.cols() != n) {
    throw std::invalid_argument("weight matrix must be square with one row per sample");
  }
  if (out.rows() != n || out.cols() != d) {
    throw std::invalid_argument("output matrix has the wrong shape");
  }
  if (n == 0 || d == 0) return;

  std::vector<T> w(n * n);
  for (std::size_t k = 0; k < w.size(); ++k) w[k] = static_cast<T>(weights.data()[k]);

  const std::size_t full = d - d % kStep;
  for (std::size_t c0 = 0; c0 < full; c0 += kBlock) {
    const std::size_t width = std::min(kBlock, full - c0);
    for (std::size_t p0 = 0; p0 < n; p0 += kTileRows) {
      const std::size_t rows = std::min(kTileRows, n - p0);
      for (std::size_t col = 0; col < width; col += kStep) {
        tile_dispatch<T>(rows, n, w.data() + p0 * n, x.data() + c0 + col, d,
                         out.data() + p0 * d + c0 + col, d, p0 == 0);
      }
    }
  }
  if (full == d) return;

  // Ragged right edge: zero-padded copy of the last columns.
  const std::size_t tail = d - full;
  std::vector<T> src(n * kStep, T{});
  std::vector<T> dst(n * kStep);
  for (std::size_t i = 0; i < n; ++i) {
    std::memcpy(src.data() + i * kStep, x.data() + i * d + full, tail * sizeof(T));
  }
  for (std::size_t p0 = 0; p0 < n; p0 += kTileRows) {
    const std::size_t rows = std::min(kTileRows, n - p0);
    tile_dispatch<T>(rows, n, w.data() + p0 * n, src.data(), kStep, dst.data() + p0 * kStep,
                     kStep, false);
  }
  for (std::size_t p = 0; p < n; ++p) {
    std::memcpy(out.data() + p * d + full, dst.data() + p * kStep, tail * sizeof(T));
  }
}

template <typename T>
void pair_rows(const Matrix<T>& x, std::span<const std::size_t> partner, double lambda,
               Matrix<T>& out) {
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  if (partner.size() != n) throw std::invalid_argument("one partner per row required");
  if (out.rows() != n || out.cols() != d) {
    throw std::invalid_argument("output matrix has the wrong shape");
  }
  const T a = static_cast<T>(lambda);
  const T b = static_cast<T>(1.0 - lambda);
  for (std::size_t p = 0; p < n; ++p) {
    if (partner[p] >= n) throw std::invalid_argument("partner index out of range");
    const T* xp = x.data() + p * d;
    const T* xj = x.data() + partner[p] * d;
    T* o = out.data() + p * d;
    for (std::size_t c = 0; c < d; ++c) o[c] = a * xp[c] + b * xj[c];
  }
}

const char* isa_name() noexcept { return kIsa; }

template void weighted_rows<float>(const WeightMatrix&, const Matrix<float>&, Matrix<float>&);
template void weighted_rows<double>(const WeightMatrix&, const Matrix<double>&, Matrix<double>&);
template void pair_rows<float>(const Matrix<float>&, std::span<const std::size_t>, double,
                               Matrix<float>&);
template void pair_rows<double>(const Matrix<double>&, std::span<const std::size_t>, double,
                                Matrix<double>&);

}  // namespace zmix::kernels
