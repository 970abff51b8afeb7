#pragma once

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

#include <cblas.h>

#include "arclass/tensor.hpp"

#if defined(_OPENMP)
#include <omp.h>
#endif

extern "C" void openblas_set_num_threads(int);

// Layout conventions, used by every operation in this module:
//   activations / images   [B, H, W, C]   (channels last)
//   conv weights           [F, KH, KW, C], bias [F]
//   linear weights         [O, I], bias [O]
// All convolutions are stride 1 with same-padding (pad = (k-1)/2 per side),
// so autoregressive outputs stay pixel-aligned with their inputs.

namespace arclass {

inline int g_threads = 0;

inline void set_threads(int n) {
  if (n <= 0) n = 1;
  g_threads = n;
  // BLAS is always run single-threaded inside; parallelism comes from the
  // fixed row/reduction partitions below so results do not depend on the
  // thread count.
  openblas_set_num_threads(1);
#if defined(_OPENMP)
  omp_set_num_threads(n);
#endif
}

inline void ensure_threads_init() {
  if (g_threads == 0) set_threads(1);
}

namespace detail {

inline void blas_gemm(CBLAS_TRANSPOSE ta, CBLAS_TRANSPOSE tb, int m, int n, int k, float alpha,
                      const float *a, int lda, const float *b, int ldb, float beta, float *c, int ldc) {
  cblas_sgemm(CblasRowMajor, ta, tb, m, n, k, alpha, a, lda, b, ldb, beta, c, ldc);
}
inline void blas_gemm(CBLAS_TRANSPOSE ta, CBLAS_TRANSPOSE tb, int m, int n, int k, double alpha,
                      const double *a, int lda, const double *b, int ldb, double beta, double *c, int ldc) {
  cblas_dgemm(CblasRowMajor, ta, tb, m, n, k, alpha, a, lda, b, ldb, beta, c, ldc);
}

// Row-partitioned GEMM. The partition is a fixed function of M, so every
// element of C is produced by the same BLAS call sequence regardless of how
// many threads execute the blocks.
constexpr int kRowBlocks = 8;
constexpr int kRedBlocks = 4;

// C[M,N] = A[M,K] * B[N,K]^T
template <typename T>
void mm_nt(const T *a, const T *b, T *c, int64_t m, int64_t n, int64_t k) {
  if (m == 0 || n == 0) return;
  const int64_t nb = std::min<int64_t>(kRowBlocks, m);
  const int64_t step = (m + nb - 1) / nb;
#pragma omp parallel for schedule(static)
  for (int64_t blk = 0; blk < nb; ++blk) {
    const int64_t r0 = blk * step, r1 = std::min<int64_t>(m, r0 + step);
    if (r0 >= r1) continue;
    blas_gemm(CblasNoTrans, CblasTrans, static_cast<int>(r1 - r0), static_cast<int>(n),
              static_cast<int>(k), T(1), a + r0 * k, static_cast<int>(k), b, static_cast<int>(k),
              T(0), c + r0 * n, static_cast<int>(n));
  }
}

// C[M,N] = A[M,K] * B[K,N]
template <typename T>
void mm_nn(const T *a, const T *b, T *c, int64_t m, int64_t n, int64_t k) {
  if (m == 0 || n == 0) return;
  const int64_t nb = std::min<int64_t>(kRowBlocks, m);
  const int64_t step = (m + nb - 1) / nb;
#pragma omp parallel for schedule(static)
  for (int64_t blk = 0; blk < nb; ++blk) {
    const int64_t r0 = blk * step, r1 = std::min<int64_t>(m, r0 + step);
    if (r0 >= r1) continue;
    blas_gemm(CblasNoTrans, CblasNoTrans, static_cast<int>(r1 - r0), static_cast<int>(n),
              static_cast<int>(k), T(1), a + r0 * k, static_cast<int>(k), b, static_cast<int>(n),
              T(0), c + r0 * n, static_cast<int>(n));
  }
}

// C[M,N] += A[K,M]^T * B[K,N]; the K reduction uses a fixed 4-way partition
// with an ordered combine so the result is thread-count independent.
template <typename T>
void mm_tn_acc(const T *a, const T *b, T *c, int64_t m, int64_t n, int64_t k) {
  if (k == 0) return;
  const int64_t nb = std::min<int64_t>(kRedBlocks, k);
  const int64_t step = (k + nb - 1) / nb;
  std::vector<std::vector<T>> partial(static_cast<size_t>(nb));
#pragma omp parallel for schedule(static)
  for (int64_t blk = 0; blk < nb; ++blk) {
    const int64_t r0 = blk * step, r1 = std::min<int64_t>(k, r0 + step);
    auto &p = partial[static_cast<size_t>(blk)];
    p.assign(static_cast<size_t>(m * n), T(0));
    if (r0 >= r1) continue;
    blas_gemm(CblasTrans, CblasNoTrans, static_cast<int>(m), static_cast<int>(n),
              static_cast<int>(r1 - r0), T(1), a + r0 * m, static_cast<int>(m), b + r0 * n,
              static_cast<int>(n), T(0), p.data(), static_cast<int>(n));
  }
  for (auto &p : partial)
    for (int64_t i = 0; i < m * n; ++i) c[i] += p[static_cast<size_t>(i)];
}

// Reusable per-thread scratch, keyed by slot so two live buffers can coexist.
template <typename T, int Slot>
std::vector<T> &scratch(size_t n) {
  thread_local std::vector<T> buf;
  if (buf.size() < n) buf.resize(n);
  return buf;
}

struct ConvDims {
  int64_t b, h, w, c;   // input
  int64_t f, kh, kw;    // filter
  int64_t ph, pw;       // same padding
  int64_t cols;         // b*h*w
  int64_t k;            // kh*kw*c
};

template <typename T>
ConvDims conv_dims(const Tensor<T> &x, const Tensor<T> &wt, const Tensor<T> &bias) {
  if (x.rank() != 4 || wt.rank() != 4)
    throw std::invalid_argument("conv2d: need input [B,H,W,C] and weight [F,KH,KW,C], got " +
                                x.shape_str() + " and " + wt.shape_str());
  ConvDims d;
  d.b = static_cast<int64_t>(x.shape[0]);
  d.h = static_cast<int64_t>(x.shape[1]);
  d.w = static_cast<int64_t>(x.shape[2]);
  d.c = static_cast<int64_t>(x.shape[3]);
  d.f = static_cast<int64_t>(wt.shape[0]);
  d.kh = static_cast<int64_t>(wt.shape[1]);
  d.kw = static_cast<int64_t>(wt.shape[2]);
  if (static_cast<int64_t>(wt.shape[3]) != d.c)
    throw std::invalid_argument("conv2d: channel mismatch between input " + x.shape_str() +
                                " and weight " + wt.shape_str());
  if (d.kh % 2 == 0 || d.kw % 2 == 0)
    throw std::invalid_argument("conv2d: kernel extents must be odd, got " + wt.shape_str());
  if (bias.numel() != static_cast<size_t>(d.f))
    throw std::invalid_argument("conv2d: bias " + bias.shape_str() + " does not match weight " +
                                wt.shape_str());
  d.ph = (d.kh - 1) / 2;
  d.pw = (d.kw - 1) / 2;
  d.cols = d.b * d.h * d.w;
  d.k = d.kh * d.kw * d.c;
  return d;
}

// col[(b,i,j), (u*kw+v)*C + c] = x[b, i+u-ph, j+v-pw, c], zero outside.
template <typename T>
void im2col(const Tensor<T> &x, const ConvDims &d, T *col) {
#pragma omp parallel for schedule(static)
  for (int64_t bi = 0; bi < d.b * d.h; ++bi) {
    const int64_t b = bi / d.h, i = bi % d.h;
    for (int64_t j = 0; j < d.w; ++j) {
      T *row = col + ((b * d.h + i) * d.w + j) * d.k;
      for (int64_t u = 0; u < d.kh; ++u) {
        const int64_t r = i + u - d.ph;
        T *dst = row + u * d.kw * d.c;
        if (r < 0 || r >= d.h) {
          std::memset(dst, 0, sizeof(T) * static_cast<size_t>(d.kw * d.c));
          continue;
        }
        for (int64_t v = 0; v < d.kw; ++v) {
          const int64_t cc = j + v - d.pw;
          if (cc < 0 || cc >= d.w) {
            std::memset(dst + v * d.c, 0, sizeof(T) * static_cast<size_t>(d.c));
          } else {
            std::memcpy(dst + v * d.c, x.ptr() + ((b * d.h + r) * d.w + cc) * d.c,
                        sizeof(T) * static_cast<size_t>(d.c));
          }
        }
      }
    }
  }
}

// dx[b, i+u-ph, j+v-pw, c] += dcol[(b,i,j), (u*kw+v)*C + c]
template <typename T>
void col2im_acc(const T *dcol, const ConvDims &d, Tensor<T> &dx) {
#pragma omp parallel for schedule(static)
  for (int64_t b = 0; b < d.b; ++b) {
    for (int64_t i = 0; i < d.h; ++i) {
      for (int64_t j = 0; j < d.w; ++j) {
        const T *row = dcol + ((b * d.h + i) * d.w + j) * d.k;
        for (int64_t u = 0; u < d.kh; ++u) {
          const int64_t r = i + u - d.ph;
          if (r < 0 || r >= d.h) continue;
          for (int64_t v = 0; v < d.kw; ++v) {
            const int64_t cc = j + v - d.pw;
            if (cc < 0 || cc >= d.w) continue;
            T *dst = dx.ptr() + ((b * d.h + r) * d.w + cc) * d.c;
            const T *src = row + (u * d.kw + v) * d.c;
            for (int64_t c = 0; c < d.c; ++c) dst[c] += src[c];
          }
        }
      }
    }
  }
}

template <typename T>
void apply_spatial_mask(const Tensor<T> &wt, const Tensor<T> &mask, Tensor<T> &out) {
  const int64_t f = static_cast<int64_t>(wt.shape[0]);
  const int64_t khw = static_cast<int64_t>(wt.shape[1] * wt.shape[2]);
  const int64_t c = static_cast<int64_t>(wt.shape[3]);
  out = wt;
  for (int64_t fi = 0; fi < f; ++fi)
    for (int64_t k = 0; k < khw; ++k) {
      const T m = mask[static_cast<size_t>(k)];
      if (m == T(1)) continue;
      T *p = out.ptr() + (fi * khw + k) * c;
      for (int64_t ci = 0; ci < c; ++ci) p[ci] *= m;
    }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// convolution

template <typename T>
Tensor<T> conv2d(const Tensor<T> &x, const Tensor<T> &wt, const Tensor<T> &bias) {
  ensure_threads_init();
  const auto d = detail::conv_dims(x, wt, bias);
  auto &col = detail::scratch<T, 0>(static_cast<size_t>(d.cols * d.k));
  detail::im2col(x, d, col.data());
  Tensor<T> y({static_cast<size_t>(d.b), static_cast<size_t>(d.h), static_cast<size_t>(d.w),
               static_cast<size_t>(d.f)});
  detail::mm_nt(col.data(), wt.ptr(), y.ptr(), d.cols, d.f, d.k);
  T *yp = y.ptr();
#pragma omp parallel for schedule(static)
  for (int64_t n = 0; n < d.cols; ++n)
    for (int64_t f = 0; f < d.f; ++f) yp[n * d.f + f] += bias[static_cast<size_t>(f)];
  return y;
}

template <typename T>
Tensor<T> masked_conv2d(const Tensor<T> &x, const Tensor<T> &wt, const Tensor<T> &mask,
                        const Tensor<T> &bias) {
  if (mask.rank() != 2 || mask.shape[0] != wt.shape[1] || mask.shape[1] != wt.shape[2])
    throw std::invalid_argument("masked_conv2d: mask " + mask.shape_str() +
                                " does not match weight spatial extents " + wt.shape_str());
  Tensor<T> wm;
  detail::apply_spatial_mask(wt, mask, wm);
  return conv2d(x, wm, bias);
}

struct ConvGrads {
  // filled only for the requested inputs
  bool want_dx = true, want_dw = true, want_db = true;
};

// Backward of conv2d. g is the output gradient [B,H,W,F].
template <typename T>
void conv2d_backward(const Tensor<T> &g, const Tensor<T> &x, const Tensor<T> &wt,
                     Tensor<T> *dx, Tensor<T> *dw, Tensor<T> *db) {
  ensure_threads_init();
  Tensor<T> dummy_bias({static_cast<size_t>(wt.shape[0])});
  const auto d = detail::conv_dims(x, wt, dummy_bias);
  if (db) {
    if (db->numel() != static_cast<size_t>(d.f)) *db = Tensor<T>({static_cast<size_t>(d.f)});
    // fixed 4-way partition over columns, ordered combine
    const int64_t nb = std::min<int64_t>(detail::kRedBlocks, d.cols);
    const int64_t step = (d.cols + nb - 1) / nb;
    std::vector<std::vector<T>> partial(static_cast<size_t>(nb));
#pragma omp parallel for schedule(static)
    for (int64_t blk = 0; blk < nb; ++blk) {
      auto &p = partial[static_cast<size_t>(blk)];
      p.assign(static_cast<size_t>(d.f), T(0));
      const int64_t r0 = blk * step, r1 = std::min<int64_t>(d.cols, r0 + step);
      for (int64_t n = r0; n < r1; ++n)
        for (int64_t f = 0; f < d.f; ++f) p[static_cast<size_t>(f)] += g.ptr()[n * d.f + f];
    }
    for (auto &p : partial)
      for (int64_t f = 0; f < d.f; ++f) (*db)[static_cast<size_t>(f)] += p[static_cast<size_t>(f)];
  }
  if (dw) {
    if (!dw->same_shape(wt)) *dw = zeros_like(wt);
    auto &col = detail::scratch<T, 0>(static_cast<size_t>(d.cols * d.k));
    detail::im2col(x, d, col.data());
    // dW[F,K] += g[N,F]^T * col[N,K]
    detail::mm_tn_acc(g.ptr(), col.data(), dw->ptr(), d.f, d.k, d.cols);
  }
  if (dx) {
    if (!dx->same_shape(x)) *dx = zeros_like(x);
    auto &dcol = detail::scratch<T, 1>(static_cast<size_t>(d.cols * d.k));
    // dcol[N,K] = g[N,F] * W[F,K]
    detail::mm_nn(g.ptr(), wt.ptr(), dcol.data(), d.cols, d.k, d.f);
    detail::col2im_acc(dcol.data(), d, *dx);
  }
}

enum class MaskKind { A, B };

// Raster-order causal mask: 1 strictly above the center row, 1 strictly left
// of center within the center row; the center itself is 0 for kind A and 1
// for kind B. Rows below the center are 0.
template <typename T = float>
Tensor<T> make_causal_mask(MaskKind kind, size_t kh, size_t kw) {
  if (kh % 2 == 0 || kw % 2 == 0)
    throw std::invalid_argument("make_causal_mask: kernel extents must be odd, got " +
                                std::to_string(kh) + "x" + std::to_string(kw));
  Tensor<T> m({kh, kw});
  const size_t cu = kh / 2, cv = kw / 2;
  for (size_t u = 0; u < kh; ++u)
    for (size_t v = 0; v < kw; ++v) {
      if (u < cu)
        m[u * kw + v] = T(1);
      else if (u == cu && v < cv)
        m[u * kw + v] = T(1);
      else if (u == cu && v == cv && kind == MaskKind::B)
        m[u * kw + v] = T(1);
    }
  return m;
}

// ---------------------------------------------------------------------------
// elementwise and reductions

template <typename T>
Tensor<T> relu(const Tensor<T> &x) {
  Tensor<T> y = x;
  T *p = y.ptr();
  const int64_t n = static_cast<int64_t>(y.numel());
#pragma omp parallel for schedule(static)
  for (int64_t i = 0; i < n; ++i) p[i] = p[i] > T(0) ? p[i] : T(0);
  return y;
}

template <typename T>
Tensor<T> add(const Tensor<T> &a, const Tensor<T> &b) {
  if (!a.same_shape(b))
    throw std::invalid_argument("add: shape mismatch " + a.shape_str() + " vs " + b.shape_str());
  Tensor<T> y = a;
  const int64_t n = static_cast<int64_t>(y.numel());
  T *p = y.ptr();
  const T *q = b.ptr();
#pragma omp parallel for schedule(static)
  for (int64_t i = 0; i < n; ++i) p[i] += q[i];
  return y;
}

template <typename T>
Tensor<T> mul(const Tensor<T> &a, const Tensor<T> &b) {
  if (!a.same_shape(b))
    throw std::invalid_argument("mul: shape mismatch " + a.shape_str() + " vs " + b.shape_str());
  Tensor<T> y = a;
  for (size_t i = 0; i < y.numel(); ++i) y[i] *= b[i];
  return y;
}

// x + table[ids[b]] broadcast over the spatial extent of sample b.
template <typename T>
Tensor<T> add_class_embedding(const Tensor<T> &x, const Tensor<T> &table,
                              const std::vector<int> &ids) {
  if (x.rank() != 4 || table.rank() != 2 || table.shape[1] != x.shape[3])
    throw std::invalid_argument("add_class_embedding: input " + x.shape_str() + " vs table " +
                                table.shape_str());
  if (ids.size() != x.shape[0])
    throw std::invalid_argument("add_class_embedding: " + std::to_string(ids.size()) +
                                " ids for batch " + x.shape_str());
  const int64_t b = static_cast<int64_t>(x.shape[0]);
  const int64_t hw = static_cast<int64_t>(x.shape[1] * x.shape[2]);
  const int64_t c = static_cast<int64_t>(x.shape[3]);
  for (int64_t i = 0; i < b; ++i)
    if (ids[static_cast<size_t>(i)] < 0 ||
        ids[static_cast<size_t>(i)] >= static_cast<int>(table.shape[0]))
      throw std::invalid_argument("add_class_embedding: class id " +
                                  std::to_string(ids[static_cast<size_t>(i)]) +
                                  " outside table " + table.shape_str());
  Tensor<T> y = x;
#pragma omp parallel for schedule(static)
  for (int64_t i = 0; i < b; ++i) {
    const T *row = table.ptr() + static_cast<int64_t>(ids[static_cast<size_t>(i)]) * c;
    T *p = y.ptr() + i * hw * c;
    for (int64_t s = 0; s < hw; ++s)
      for (int64_t k = 0; k < c; ++k) p[s * c + k] += row[k];
  }
  return y;
}

// log softmax along the last axis, max-shifted for stability.
template <typename T>
Tensor<T> log_softmax(const Tensor<T> &x) {
  if (x.rank() == 0 || x.shape.back() < 1)
    throw std::invalid_argument("log_softmax: need a non-empty last axis, got " + x.shape_str());
  const int64_t l = static_cast<int64_t>(x.shape.back());
  const int64_t rows = static_cast<int64_t>(x.numel()) / l;
  Tensor<T> y = x;
  T *p = y.ptr();
#pragma omp parallel for schedule(static)
  for (int64_t r = 0; r < rows; ++r) {
    T *row = p + r * l;
    T mx = row[0];
    for (int64_t i = 1; i < l; ++i) mx = std::max(mx, row[i]);
    double s = 0.0;
    for (int64_t i = 0; i < l; ++i) s += std::exp(static_cast<double>(row[i] - mx));
    const T lse = mx + static_cast<T>(std::log(s));
    for (int64_t i = 0; i < l; ++i) row[i] -= lse;
  }
  return y;
}

template <typename T>
Tensor<T> gather_last(const Tensor<T> &x, const std::vector<int> &idx) {
  const int64_t l = static_cast<int64_t>(x.shape.back());
  const int64_t rows = static_cast<int64_t>(x.numel()) / l;
  if (static_cast<int64_t>(idx.size()) != rows)
    throw std::invalid_argument("gather_last: " + std::to_string(idx.size()) + " indices for " +
                                std::to_string(rows) + " rows");
  std::vector<size_t> oshape(x.shape.begin(), x.shape.end() - 1);
  Tensor<T> y(oshape);
  for (int64_t r = 0; r < rows; ++r) {
    const int t = idx[static_cast<size_t>(r)];
    if (t < 0 || t >= static_cast<int>(l))
      throw std::invalid_argument("gather_last: index " + std::to_string(t) + " out of range [0," +
                                  std::to_string(l) + ")");
    y[static_cast<size_t>(r)] = x[static_cast<size_t>(r * l + t)];
  }
  return y;
}

// Mean over rows of -logprobs[n, targets[n]].
template <typename T>
T nll(const Tensor<T> &logprobs, const std::vector<int> &targets) {
  if (logprobs.rank() != 2)
    throw std::invalid_argument("nll: expected [N,L] logprobs, got " + logprobs.shape_str());
  const int64_t n = static_cast<int64_t>(logprobs.shape[0]);
  const int64_t l = static_cast<int64_t>(logprobs.shape[1]);
  if (static_cast<int64_t>(targets.size()) != n)
    throw std::invalid_argument("nll: " + std::to_string(targets.size()) + " targets for " +
                                std::to_string(n) + " rows");
  double acc = 0.0;
  for (int64_t i = 0; i < n; ++i) {
    const int t = targets[static_cast<size_t>(i)];
    if (t < 0 || t >= static_cast<int>(l))
      throw std::invalid_argument("nll: target " + std::to_string(t) + " out of range [0," +
                                  std::to_string(l) + ")");
    acc -= static_cast<double>(logprobs[static_cast<size_t>(i * l + t)]);
  }
  return static_cast<T>(acc / static_cast<double>(n));
}

// 2x2 average pooling, stride 2; spatial extents must be even.
template <typename T>
Tensor<T> avg_pool2(const Tensor<T> &x) {
  if (x.rank() != 4 || x.shape[1] % 2 || x.shape[2] % 2)
    throw std::invalid_argument("avg_pool2: need even [B,H,W,C], got " + x.shape_str());
  const int64_t b = static_cast<int64_t>(x.shape[0]);
  const int64_t h = static_cast<int64_t>(x.shape[1]);
  const int64_t w = static_cast<int64_t>(x.shape[2]);
  const int64_t c = static_cast<int64_t>(x.shape[3]);
  Tensor<T> y({static_cast<size_t>(b), static_cast<size_t>(h / 2), static_cast<size_t>(w / 2),
               static_cast<size_t>(c)});
#pragma omp parallel for schedule(static)
  for (int64_t i = 0; i < b; ++i)
    for (int64_t r = 0; r < h / 2; ++r)
      for (int64_t q = 0; q < w / 2; ++q)
        for (int64_t k = 0; k < c; ++k) {
          const T s = x.at4(static_cast<size_t>(i), static_cast<size_t>(2 * r),
                            static_cast<size_t>(2 * q), static_cast<size_t>(k)) +
                      x.at4(static_cast<size_t>(i), static_cast<size_t>(2 * r),
                            static_cast<size_t>(2 * q + 1), static_cast<size_t>(k)) +
                      x.at4(static_cast<size_t>(i), static_cast<size_t>(2 * r + 1),
                            static_cast<size_t>(2 * q), static_cast<size_t>(k)) +
                      x.at4(static_cast<size_t>(i), static_cast<size_t>(2 * r + 1),
                            static_cast<size_t>(2 * q + 1), static_cast<size_t>(k));
          y.at4(static_cast<size_t>(i), static_cast<size_t>(r), static_cast<size_t>(q),
                static_cast<size_t>(k)) = s / T(4);
        }
  return y;
}

template <typename T>
Tensor<T> global_avg_pool(const Tensor<T> &x) {
  if (x.rank() != 4)
    throw std::invalid_argument("global_avg_pool: need [B,H,W,C], got " + x.shape_str());
  const int64_t b = static_cast<int64_t>(x.shape[0]);
  const int64_t hw = static_cast<int64_t>(x.shape[1] * x.shape[2]);
  const int64_t c = static_cast<int64_t>(x.shape[3]);
  Tensor<T> y({static_cast<size_t>(b), static_cast<size_t>(c)});
  for (int64_t i = 0; i < b; ++i) {
    const T *p = x.ptr() + i * hw * c;
    for (int64_t s = 0; s < hw; ++s)
      for (int64_t k = 0; k < c; ++k) y[static_cast<size_t>(i * c + k)] += p[s * c + k];
    for (int64_t k = 0; k < c; ++k) y[static_cast<size_t>(i * c + k)] /= static_cast<T>(hw);
  }
  return y;
}

// y[N,O] = x[N,I] * w[O,I]^T + b
template <typename T>
Tensor<T> linear(const Tensor<T> &x, const Tensor<T> &wt, const Tensor<T> &bias) {
  ensure_threads_init();
  if (x.rank() != 2 || wt.rank() != 2 || x.shape[1] != wt.shape[1] || bias.numel() != wt.shape[0])
    throw std::invalid_argument("linear: input " + x.shape_str() + " weight " + wt.shape_str() +
                                " bias " + bias.shape_str());
  const int64_t n = static_cast<int64_t>(x.shape[0]);
  const int64_t o = static_cast<int64_t>(wt.shape[0]);
  const int64_t i = static_cast<int64_t>(wt.shape[1]);
  Tensor<T> y({static_cast<size_t>(n), static_cast<size_t>(o)});
  detail::mm_nt(x.ptr(), wt.ptr(), y.ptr(), n, o, i);
  for (int64_t r = 0; r < n; ++r)
    for (int64_t k = 0; k < o; ++k) y[static_cast<size_t>(r * o + k)] += bias[static_cast<size_t>(k)];
  return y;
}

template <typename T>
T sum_all(const Tensor<T> &x) {
  double s = 0.0;
  for (size_t i = 0; i < x.numel(); ++i) s += static_cast<double>(x[i]);
  return static_cast<T>(s);
}

}  // namespace arclass
