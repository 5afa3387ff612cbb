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

#ifndef ERGOBOUND_KERNELS_HPP
#define ERGOBOUND_KERNELS_HPP

#include <cstddef>
#include <string_view>
#include <vector>

namespace ergobound::kernels
{

// Data-parallel inner loops used by the integrator, the bound evaluator and
// power iteration. Every variant has the same contract as the scalar
// reference; vector variants may differ from it by reassociation and FMA
// contraction only.
//
// Block layout: a block of k state vectors of length n is stored row-major
// as n rows of k contiguous doubles, so lane c of row i is component i of
// vector c. Kernels take raw pointers so the ISA-specific translation units
// never instantiate shared inline templates.
struct Table
{
    const char* name;

    /// out[i][c] = sum_j m[i][j] * x[j][c]; m is n x n, x and out are n x k.
    void (*matmul_block)(const double* m, std::size_t n, const double* x, std::size_t k,
                         double* out);

    /// y[i] = sum_j m[i][j] * x[j]
    void (*matvec)(const double* m, std::size_t n, const double* x, double* y);

    /// out = x + alpha * y
    void (*axpy_to)(const double* x, double alpha, const double* y, std::size_t len,
                    double* out);

    /// x += h/6 * (k1 + 2 k2 + 2 k3 + k4)
    void (*rk4_combine)(double* x, const double* k1, const double* k2, const double* k3,
                        const double* k4, double h, std::size_t len);

    /// out[c] = sum_i a[i][c] over a rows x cols row-major array.
    void (*column_sums)(const double* a, std::size_t rows, std::size_t cols, double* out);

    /// out[c] = sum_i |a[i][c]|
    void (*column_abs_sums)(const double* a, std::size_t rows, std::size_t cols, double* out);
};

const Table& scalar();

/// nullptr when not compiled in or the running CPU lacks AVX2+FMA.
const Table* avx2();

/// Best table for the running CPU; selected once.
const Table& best();

/// "scalar", "avx2" or "auto". Throws ergobound::Error on unknown or
/// unavailable names.
const Table& by_name(std::string_view name);

/// Names usable with by_name() on this machine, scalar first.
std::vector<std::string_view> available();

}  // namespace ergobound::kernels

#endif  // ERGOBOUND_KERNELS_HPP
