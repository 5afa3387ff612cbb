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

#include "ergobound/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "ergobound/error.hpp"

namespace ergobound
{

SquareMatrix::SquareMatrix(std::size_t n, double fill) : n_(n), a_(n * n, fill) {}

SquareMatrix::SquareMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : n_(rows.size()), a_()
{
    a_.reserve(n_ * n_);
    for (const auto& r : rows)
    {
        if (r.size() != n_)
        {
            throw Error(ErrorCode::invalid_argument, "SquareMatrix: ragged initializer");
        }
        a_.insert(a_.end(), r.begin(), r.end());
    }
}

SquareMatrix SquareMatrix::identity(std::size_t n)
{
    SquareMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        m(i, i) = 1.0;
    }
    return m;
}

SquareMatrix SquareMatrix::transposed() const
{
    SquareMatrix t(n_);
    for (std::size_t i = 0; i < n_; ++i)
    {
        for (std::size_t j = 0; j < n_; ++j)
        {
            t(j, i) = (*this)(i, j);
        }
    }
    return t;
}

double SquareMatrix::max_abs() const
{
    double m = 0.0;
    for (double v : a_)
    {
        m = std::max(m, std::abs(v));
    }
    return m;
}

bool SquareMatrix::all_finite() const
{
    return std::all_of(a_.begin(), a_.end(), [](double v) { return std::isfinite(v); });
}

SquareMatrix operator*(const SquareMatrix& lhs, const SquareMatrix& rhs)
{
    const std::size_t n = lhs.dim();
    if (rhs.dim() != n)
    {
        throw Error(ErrorCode::invalid_argument, "matrix product: dimension mismatch");
    }
    SquareMatrix out(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        for (std::size_t k = 0; k < n; ++k)
        {
            const double lik = lhs(i, k);
            if (lik == 0.0)
            {
                continue;
            }
            for (std::size_t j = 0; j < n; ++j)
            {
                out(i, j) += lik * rhs(k, j);
            }
        }
    }
    return out;
}

SquareMatrix operator-(const SquareMatrix& lhs, const SquareMatrix& rhs)
{
    if (rhs.dim() != lhs.dim())
    {
        throw Error(ErrorCode::invalid_argument, "matrix difference: dimension mismatch");
    }
    SquareMatrix out = lhs;
    auto o = out.data();
    auto r = rhs.data();
    for (std::size_t i = 0; i < o.size(); ++i)
    {
        o[i] -= r[i];
    }
    return out;
}

Vector operator*(const SquareMatrix& m, std::span<const double> x)
{
    const std::size_t n = m.dim();
    if (x.size() != n)
    {
        throw Error(ErrorCode::invalid_argument, "matrix-vector product: dimension mismatch");
    }
    Vector y(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
    {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j)
        {
            s += m(i, j) * x[j];
        }
        y[i] = s;
    }
    return y;
}

double trace(const SquareMatrix& m)
{
    double s = 0.0;
    for (std::size_t i = 0; i < m.dim(); ++i)
    {
        s += m(i, i);
    }
    return s;
}

double determinant(const SquareMatrix& m)
{
    SquareMatrix lu = m;
    const std::size_t n = lu.dim();
    double det = 1.0;
    for (std::size_t c = 0; c < n; ++c)
    {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
        {
            if (std::abs(lu(r, c)) > std::abs(lu(piv, c)))
            {
                piv = r;
            }
        }
        if (lu(piv, c) == 0.0)
        {
            return 0.0;
        }
        if (piv != c)
        {
            for (std::size_t j = 0; j < n; ++j)
            {
                std::swap(lu(piv, j), lu(c, j));
            }
            det = -det;
        }
        det *= lu(c, c);
        for (std::size_t r = c + 1; r < n; ++r)
        {
            const double f = lu(r, c) / lu(c, c);
            for (std::size_t j = c; j < n; ++j)
            {
                lu(r, j) -= f * lu(c, j);
            }
        }
    }
    return det;
}

double max_abs_diff(const SquareMatrix& lhs, const SquareMatrix& rhs)
{
    if (lhs.dim() != rhs.dim())
    {
        throw Error(ErrorCode::invalid_argument, "max_abs_diff: dimension mismatch");
    }
    double m = 0.0;
    auto l = lhs.data();
    auto r = rhs.data();
    for (std::size_t i = 0; i < l.size(); ++i)
    {
        m = std::max(m, std::abs(l[i] - r[i]));
    }
    return m;
}

double l1_norm(std::span<const double> x)
{
    double s = 0.0;
    for (double v : x)
    {
        s += std::abs(v);
    }
    return s;
}

}  // namespace ergobound
