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

#include "ergobound/transform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ergobound/error.hpp"

namespace ergobound
{

WeightVector::WeightVector(std::vector<double> d) : d_(std::move(d))
{
    if (d_.empty())
    {
        throw Error(ErrorCode::invalid_argument, "weight vector is empty");
    }
    for (double v : d_)
    {
        if (!(v > 0.0) || !std::isfinite(v))
        {
            throw Error(ErrorCode::invalid_argument, "weights must be positive and finite");
        }
    }
}

WeightVector WeightVector::ones(std::size_t n) { return WeightVector(std::vector<double>(n, 1.0)); }

WeightVector WeightVector::normalized_first() const
{
    std::vector<double> d = d_;
    const double first = d.front();
    for (double& v : d)
    {
        v /= first;
    }
    return WeightVector(std::move(d));
}

TransformPair TransformPair::build(std::size_t S)
{
    TransformPair tp{SquareMatrix(S), SquareMatrix::identity(S)};
    for (std::size_t i = 0; i < S; ++i)
    {
        for (std::size_t j = i; j < S; ++j)
        {
            tp.forward(i, j) = 1.0;
        }
        if (i + 1 < S)
        {
            tp.inverse(i, i + 1) = -1.0;
        }
    }
    return tp;
}

Vector apply_t(std::span<const double> x)
{
    Vector u(x.size());
    double tail = 0.0;
    for (std::size_t i = x.size(); i-- > 0;)
    {
        tail += x[i];
        u[i] = tail;
    }
    return u;
}

Vector to_weighted(std::span<const double> y, const WeightVector& d)
{
    if (y.size() != d.size())
    {
        throw Error(ErrorCode::invalid_argument, "to_weighted: dimension mismatch");
    }
    Vector w = apply_t(y);
    for (std::size_t i = 0; i < w.size(); ++i)
    {
        w[i] *= d[i];
    }
    return w;
}

SquareMatrix reduce(const SquareMatrix& A)
{
    if (A.dim() < 2)
    {
        throw Error(ErrorCode::invalid_argument, "reduce: generator must have at least 2 states");
    }
    const std::size_t S = A.dim() - 1;
    SquareMatrix B(S);
    for (std::size_t i = 0; i < S; ++i)
    {
        const double ai0 = A(i + 1, 0);
        for (std::size_t j = 0; j < S; ++j)
        {
            B(i, j) = A(i + 1, j + 1) - ai0;
        }
    }
    return B;
}

SquareMatrix build_reduced(const ChainSpec& spec, double t) { return reduce(eval_transposed(spec, t)); }

SquareMatrix to_bstar(const SquareMatrix& B)
{
    const std::size_t S = B.dim();
    SquareMatrix out(S);
    // Column differences first, then tail sums from the bottom row up.
    std::vector<double> tail(S, 0.0);
    for (std::size_t k = S; k-- > 0;)
    {
        for (std::size_t j = 0; j < S; ++j)
        {
            const double prev = j == 0 ? 0.0 : B(k, j - 1);
            tail[j] += B(k, j) - prev;
            out(k, j) = tail[j];
        }
    }
    return out;
}

SquareMatrix bstar_at(const ChainSpec& spec, double t) { return to_bstar(build_reduced(spec, t)); }

SquareMatrix analytic_bstar(const ChainSpec& spec, double t)
{
    const std::size_t S = spec.states();
    auto eval = [t](const std::vector<RateFunction>& v) {
        std::vector<double> out(v.size());
        for (std::size_t i = 0; i < v.size(); ++i)
        {
            out[i] = v[i](t);
        }
        return out;
    };

    // 1-based accessors matching the usual notation; out-of-range sizes are 0.
    SquareMatrix m(S);
    auto at = [&m](std::size_t r, std::size_t c) -> double& { return m(r - 1, c - 1); };

    switch (spec.kind())
    {
    case ChainKind::general:
        throw Error(ErrorCode::invalid_argument, "analytic_bstar: no closed form for general chains");

    case ChainKind::birth_death:
    {
        const auto lam = eval(spec.lambda());  // lam[i] = lambda_i
        const auto mu = eval(spec.mu());       // mu[i-1] = mu_i
        for (std::size_t r = 1; r <= S; ++r)
        {
            at(r, r) = -(lam[r - 1] + mu[r - 1]);
            if (r < S)
            {
                at(r, r + 1) = mu[r - 1];
                at(r + 1, r) = lam[r];
            }
        }
        break;
    }

    case ChainKind::batch_birth:
    case ChainKind::batch_death:
    case ChainKind::batch_both:
    {
        const bool births = spec.kind() != ChainKind::batch_death;
        const bool deaths = spec.kind() != ChainKind::batch_birth;
        const auto av = births ? eval(spec.a()) : std::vector<double>(S, 0.0);
        const auto bv = deaths ? eval(spec.b()) : std::vector<double>(S, 0.0);
        auto a = [&av](std::size_t k) { return k >= 1 && k <= av.size() ? av[k - 1] : 0.0; };
        auto b = [&bv](std::size_t k) { return k >= 1 && k <= bv.size() ? bv[k - 1] : 0.0; };

        std::vector<double> mu(S, 0.0);
        std::vector<double> lam(S, 0.0);
        if (spec.kind() == ChainKind::batch_birth)
        {
            mu = eval(spec.mu());
        }
        if (spec.kind() == ChainKind::batch_death)
        {
            lam = eval(spec.lambda());
        }

        for (std::size_t r = 1; r <= S; ++r)
        {
            double deaths_r = 0.0;  // b_1 + ... + b_r
            for (std::size_t k = 1; k <= r; ++k)
            {
                deaths_r += b(k);
            }
            if (spec.kind() == ChainKind::batch_death)
            {
                at(r, r) = -(lam[r - 1] + deaths_r);
            }
            else
            {
                // a_rr - a_{S-r+1}, with a_rr = -(mu_r + a_1 + ... + a_{S-r} + b_1 + ... + b_r)
                double a_rr = -(mu[r - 1] + deaths_r);
                for (std::size_t k = 1; k <= S - r; ++k)
                {
                    a_rr -= a(k);
                }
                at(r, r) = a_rr - a(S - r + 1);
            }

            for (std::size_t c = 1; c < r; ++c)
            {
                at(r, c) = a(r - c) - a(S - c + 1);
            }
            for (std::size_t c = r + 1; c <= S; ++c)
            {
                at(r, c) = b(c - r) - b(c);
            }
        }
        if (spec.kind() == ChainKind::batch_birth)
        {
            for (std::size_t r = 1; r < S; ++r)
            {
                at(r, r + 1) = mu[r - 1];
            }
        }
        if (spec.kind() == ChainKind::batch_death)
        {
            for (std::size_t r = 1; r < S; ++r)
            {
                at(r + 1, r) = lam[r];
            }
        }
        break;
    }
    }
    return m;
}

NonnegReport check_essential_nonnegativity(const SquareMatrix& m, double rel_tol)
{
    NonnegReport rep;
    rep.tolerance = rel_tol * m.max_abs();
    rep.min_offdiag = std::numeric_limits<double>::infinity();
    const std::size_t n = m.dim();
    for (std::size_t i = 0; i < n; ++i)
    {
        for (std::size_t j = 0; j < n; ++j)
        {
            if (i == j)
            {
                continue;
            }
            const double v = m(i, j);
            rep.min_offdiag = std::min(rep.min_offdiag, v);
            if (v < -rep.tolerance)
            {
                rep.violations.push_back({i, j, v});
            }
        }
    }
    rep.pass = rep.violations.empty();
    return rep;
}

SquareMatrix apply_weights(const SquareMatrix& bstar, const WeightVector& d)
{
    const std::size_t n = bstar.dim();
    if (d.size() != n)
    {
        throw Error(ErrorCode::invalid_argument, "apply_weights: weight count " + std::to_string(d.size()) +
                                                     " != dimension " + std::to_string(n));
    }
    SquareMatrix out(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        for (std::size_t j = 0; j < n; ++j)
        {
            out(i, j) = i == j ? bstar(i, j) : d[i] * bstar(i, j) / d[j];
        }
    }
    return out;
}

}  // namespace ergobound
