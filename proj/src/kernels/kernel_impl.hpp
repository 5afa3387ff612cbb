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

#ifndef ERGOBOUND_SRC_KERNEL_IMPL_HPP
#define ERGOBOUND_SRC_KERNEL_IMPL_HPP

#include <cstddef>

// Internal: per-ISA entry points. Deliberately free of standard-library
// templates so that the AVX2 translation unit cannot leak VEX-encoded
// instantiations into code shared with the scalar path.

namespace ergobound::kernels::detail
{

void scalar_matmul_block(const double* m, std::size_t n, const double* x, std::size_t k,
                         double* out);
void scalar_matvec(const double* m, std::size_t n, const double* x, double* y);
void scalar_axpy_to(const double* x, double alpha, const double* y, std::size_t len,
                    double* out);
void scalar_rk4_combine(double* x, const double* k1, const double* k2, const double* k3,
                        const double* k4, double h, std::size_t len);
void scalar_column_sums(const double* a, std::size_t rows, std::size_t cols, double* out);
void scalar_column_abs_sums(const double* a, std::size_t rows, std::size_t cols, double* out);

#if defined(ERGOBOUND_HAVE_AVX2)
void avx2_matmul_block(const double* m, std::size_t n, const double* x, std::size_t k,
                       double* out);
void avx2_matvec(const double* m, std::size_t n, const double* x, double* y);
void avx2_axpy_to(const double* x, double alpha, const double* y, std::size_t len,
                  double* out);
void avx2_rk4_combine(double* x, const double* k1, const double* k2, const double* k3,
                      const double* k4, double h, std::size_t len);
void avx2_column_sums(const double* a, std::size_t rows, std::size_t cols, double* out);
void avx2_column_abs_sums(const double* a, std::size_t rows, std::size_t cols, double* out);
#endif

}  // namespace ergobound::kernels::detail

#endif  // ERGOBOUND_SRC_KERNEL_IMPL_HPP
