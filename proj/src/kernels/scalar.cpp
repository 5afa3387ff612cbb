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

#include "kernel_impl.hpp"

#include <cmath>

namespace ergobound::kernels::detail
{

void scalar_matmul_block(const double* m, std::size_t n, const double* x, std::size_t k,
                         double* out)
{
    for (std::size_t i = 0; i < n; ++i)
    {
        double* o = out + i * k;
        for (std::size_t c = 0; c < k; ++c)
        {
            o[c] = 0.0;
        }
        const double* mi = m + i * n;
        for (std::size_t j = 0; j < n; ++j)
        {
            const double mij = mi[j];
            const double* xj = x + j * k;
            for (std::size_t c = 0; c < k; ++c)
            {
                o[c] += mij * xj[c];
            }
        }
    }
}

void scalar_matvec(const double* m, std::size_t n, const double* x, double* y)
{
    for (std::size_t i = 0; i < n; ++i)
    {
        const double* mi = m + i * n;
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j)
        {
            s += mi[j] * x[j];
        }
        y[i] = s;
    }
}

void scalar_axpy_to(const double* x, double alpha, const double* y, std::size_t len,
                    double* out)
{
    for (std::size_t i = 0; i < len; ++i)
    {
        out[i] = x[i] + alpha * y[i];
    }
}

void scalar_rk4_combine(double* x, const double* k1, const double* k2, const double* k3,
                        const double* k4, double h, std::size_t len)
{
    const double h6 = h / 6.0;
    for (std::size_t i = 0; i < len; ++i)
    {
        x[i] += h6 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
}

void scalar_column_sums(const double* a, std::size_t rows, std::size_t cols, double* out)
{
    for (std::size_t c = 0; c < cols; ++c)
    {
        out[c] = 0.0;
    }
    for (std::size_t i = 0; i < rows; ++i)
    {
        const double* ai = a + i * cols;
        for (std::size_t c = 0; c < cols; ++c)
        {
            out[c] += ai[c];
        }
    }
}

void scalar_column_abs_sums(const double* a, std::size_t rows, std::size_t cols, double* out)
{
    for (std::size_t c = 0; c < cols; ++c)
    {
        out[c] = 0.0;
    }
    for (std::size_t i = 0; i < rows; ++i)
    {
        const double* ai = a + i * cols;
        for (std::size_t c = 0; c < cols; ++c)
        {
            out[c] += std::abs(ai[c]);
        }
    }
}

}  // namespace ergobound::kernels::detail
