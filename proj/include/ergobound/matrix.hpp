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

#ifndef ERGOBOUND_MATRIX_HPP
#define ERGOBOUND_MATRIX_HPP

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace ergobound
{

using Vector = std::vector<double>;

/// Dense row-major square matrix. Small by assumption (S up to a few
/// thousand); no expression templates, no aliasing tricks.
class SquareMatrix
{
public:
    SquareMatrix() = default;
    explicit SquareMatrix(std::size_t n, double fill = 0.0);
    SquareMatrix(std::initializer_list<std::initializer_list<double>> rows);

    static SquareMatrix identity(std::size_t n);

    std::size_t dim() const noexcept { return n_; }

    double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

    std::span<double> data() noexcept { return a_; }
    std::span<const double> data() const noexcept { return a_; }
    std::span<const double> row(std::size_t i) const { return {a_.data() + i * n_, n_}; }

    SquareMatrix transposed() const;
    double max_abs() const;
    bool all_finite() const;

    friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

private:
    std::size_t n_ = 0;
    std::vector<double> a_;
};

SquareMatrix operator*(const SquareMatrix& lhs, const SquareMatrix& rhs);
SquareMatrix operator-(const SquareMatrix& lhs, const SquareMatrix& rhs);
Vector operator*(const SquareMatrix& m, std::span<const double> x);

double trace(const SquareMatrix& m);

/// LU with partial pivoting. Returns 0 for numerically singular input.
double determinant(const SquareMatrix& m);

/// Largest |lhs(i,j) - rhs(i,j)|; dimensions must agree.
double max_abs_diff(const SquareMatrix& lhs, const SquareMatrix& rhs);

double l1_norm(std::span<const double> x);

}  // namespace ergobound

#endif  // ERGOBOUND_MATRIX_HPP
