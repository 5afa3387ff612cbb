/*
 * Copyright 2026 The ergobound Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Compiled with -mavx2 -mfma. Only reached after a runtime CPU check.

#include "kernel_impl.hpp"

#include <immintrin.h>

namespace ergobound::kernels::detail
{

namespace
{

inline double hsum(__m256d v)
{
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline double fabs_scalar(double v) { return v < 0.0 ? -v : v; }

}  // namespace

void avx2_matmul_block(const double* m, std::size_t n, const double* x, std::size_t k,
                       double* out)
{
    for (std::size_t i = 0; i < n; ++i)
    {
        const double* mi = m + i * n;
        double* o = out + i * k;
        std::size_t c = 0;
        for (; c + 16 <= k; c += 16)
        {
            __m256d a0 = _mm256_setzero_pd();
            __m256d a1 = _mm256_setzero_pd();
            __m256d a2 = _mm256_setzero_pd();
            __m256d a3 = _mm256_setzero_pd();
            for (std::size_t j = 0; j < n; ++j)
            {
                const __m256d b = _mm256_broadcast_sd(mi + j);
                const double* xj = x + j * k + c;
                a0 = _mm256_fmadd_pd(b, _mm256_loadu_pd(xj), a0);
                a1 = _mm256_fmadd_pd(b, _mm256_loadu_pd(xj + 4), a1);
                a2 = _mm256_fmadd_pd(b, _mm256_loadu_pd(xj + 8), a2);
                a3 = _mm256_fmadd_pd(b, _mm256_loadu_pd(xj + 12), a3);
            }
            _mm256_storeu_pd(o + c, a0);
            _mm256_storeu_pd(o + c + 4, a1);
            _mm256_storeu_pd(o + c + 8, a2);
            _mm256_storeu_pd(o + c + 12, a3);
        }
        for (; c + 4 <= k; c += 4)
        {
            __m256d a0 = _mm256_setzero_pd();
            for (std::size_t j = 0; j < n; ++j)
            {
                a0 = _mm256_fmadd_pd(_mm256_broadcast_sd(mi + j), _mm256_loadu_pd(x + j * k + c),
                                     a0);
            }
            _mm256_storeu_pd(o + c, a0);
        }
        for (; c < k; ++c)
        {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j)
            {
                s += mi[j] * x[j * k + c];
            }
            o[c] = s;
        }
    }
}

void avx2_matvec(const double* m, std::size_t n, const double* x, double* y)
{
    for (std::size_t i = 0; i < n; ++i)
    {
        const double* mi = m + i * n;
        __m256d acc0 = _mm256_setzero_pd();
        __m256d acc1 = _mm256_setzero_pd();
        std::size_t j = 0;
        for (; j + 8 <= n; j += 8)
        {
            acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(mi + j), _mm256_loadu_pd(x + j), acc0);
            acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(mi + j + 4), _mm256_loadu_pd(x + j + 4), acc1);
        }
        for (; j + 4 <= n; j += 4)
        {
            acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(mi + j), _mm256_loadu_pd(x + j), acc0);
        }
        double s = hsum(_mm256_add_pd(acc0, acc1));
        for (; j < n; ++j)
        {
            s += mi[j] * x[j];
        }
        y[i] = s;
    }
}

void avx2_axpy_to(const double* x, double alpha, const double* y, std::size_t len, double* out)
{
    const __m256d a = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= len; i += 4)
    {
        _mm256_storeu_pd(out + i,
                         _mm256_fmadd_pd(a, _mm256_loadu_pd(y + i), _mm256_loadu_pd(x + i)));
    }
    for (; i < len; ++i)
    {
        out[i] = x[i] + alpha * y[i];
    }
}

void avx2_rk4_combine(double* x, const double* k1, const double* k2, const double* k3,
                      const double* k4, double h, std::size_t len)
{
    const double h6 = h / 6.0;
    const __m256d vh6 = _mm256_set1_pd(h6);
    const __m256d two = _mm256_set1_pd(2.0);
    std::size_t i = 0;
    for (; i + 4 <= len; i += 4)
    {
        __m256d s = _mm256_add_pd(_mm256_loadu_pd(k1 + i), _mm256_loadu_pd(k4 + i));
        s = _mm256_fmadd_pd(two, _mm256_add_pd(_mm256_loadu_pd(k2 + i), _mm256_loadu_pd(k3 + i)),
                            s);
        _mm256_storeu_pd(x + i, _mm256_fmadd_pd(vh6, s, _mm256_loadu_pd(x + i)));
    }
    for (; i < len; ++i)
    {
        x[i] += h6 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
}

void avx2_column_sums(const double* a, std::size_t rows, std::size_t cols, double* out)
{
    std::size_t c = 0;
    for (; c + 4 <= cols; c += 4)
    {
        __m256d acc = _mm256_setzero_pd();
        for (std::size_t i = 0; i < rows; ++i)
        {
            acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + i * cols + c));
        }
        _mm256_storeu_pd(out + c, acc);
    }
    for (; c < cols; ++c)
    {
        double s = 0.0;
        for (std::size_t i = 0; i < rows; ++i)
        {
            s += a[i * cols + c];
        }
        out[c] = s;
    }
}

void avx2_column_abs_sums(const double* a, std::size_t rows, std::size_t cols, double* out)
{
    const __m256d sign = _mm256_set1_pd(-0.0);
    std::size_t c = 0;
    for (; c + 4 <= cols; c += 4)
    {
        __m256d acc = _mm256_setzero_pd();
        for (std::size_t i = 0; i < rows; ++i)
        {
            acc = _mm256_add_pd(acc, _mm256_andnot_pd(sign, _mm256_loadu_pd(a + i * cols + c)));
        }
        _mm256_storeu_pd(out + c, acc);
    }
    for (; c < cols; ++c)
    {
        double s = 0.0;
        for (std::size_t i = 0; i < rows; ++i)
        {
            s += fabs_scalar(a[i * cols + c]);
        }
        out[c] = s;
    }
}

}  // namespace ergobound::kernels::detail
