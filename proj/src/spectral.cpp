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

#include "ergobound/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <sstream>

#include "ergobound/error.hpp"
#include "ergobound/random.hpp"

namespace ergobound
{

namespace
{

std::vector<bool> reachable(const SquareMatrix& m, double threshold, bool reverse)
{
    const std::size_t n = m.dim();
    std::vector<bool> seen(n, false);
    std::deque<std::size_t> queue{0};
    seen[0] = true;
    while (!queue.empty())
    {
        const std::size_t u = queue.front();
        queue.pop_front();
        for (std::size_t v = 0; v < n; ++v)
        {
            const double e = reverse ? m(v, u) : m(u, v);
            if (v != u && !seen[v] && e > threshold)
            {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    return seen;
}

double spread(const std::vector<double>& v)
{
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi - *lo;
}

}  // namespace

ColumnSumBounds column_sum_bounds(const SquareMatrix& m, const kernels::Table& k)
{
    ColumnSumBounds out;
    const std::size_t n = m.dim();
    out.column_sums.assign(n, 0.0);
    k.column_sums(m.data().data(), n, n, out.column_sums.data());
    const auto [lo, hi] = std::minmax_element(out.column_sums.begin(), out.column_sums.end());
    out.lower = *lo;
    out.upper = *hi;
    return out;
}

bool check_irreducible(const SquareMatrix& m, double rel_tol)
{
    if (m.dim() <= 1)
    {
        return true;
    }
    const double threshold = rel_tol * m.max_abs();
    const auto fwd = reachable(m, threshold, false);
    const auto bwd = reachable(m, threshold, true);
    return std::all_of(fwd.begin(), fwd.end(), [](bool b) { return b; }) &&
           std::all_of(bwd.begin(), bwd.end(), [](bool b) { return b; });
}

SharpRate perron_weights(const SquareMatrix& bstar, const PowerIterationOptions& opts)
{
    const std::size_t n = bstar.dim();
    if (n == 0)
    {
        throw Error(ErrorCode::invalid_argument, "perron_weights: empty matrix");
    }
    const kernels::Table& kern = opts.kernels != nullptr ? *opts.kernels : kernels::best();

    const auto nonneg = check_essential_nonnegativity(bstar);
    if (!nonneg.pass)
    {
        std::ostringstream os;
        os << "perron_weights: B* is not essentially non-negative (min off-diagonal "
           << nonneg.min_offdiag << ")";
        throw Error(ErrorCode::not_nonnegative, os.str());
    }
    if (!check_irreducible(bstar))
    {
        throw Error(ErrorCode::reducible, "perron_weights: B* is reducible; no unique positive weighting");
    }

    SharpRate out;
    if (n == 1)
    {
        out.lambda0 = bstar(0, 0);
        out.weights = WeightVector::ones(1);
        return out;
    }

    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i)
    {
        m = std::max(m, std::abs(bstar(i, i)));
    }
    // A shift of exactly m leaves a zero diagonal when all b*_jj are equal,
    // and a bipartite pattern (birth-death) is then periodic.
    const double shift = m > 0.0 ? 1.5 * m : 1.0;
    out.shift = shift;

    SquareMatrix cprime = bstar.transposed();
    for (std::size_t i = 0; i < n; ++i)
    {
        cprime(i, i) += shift;
    }

    std::vector<double> x = opts.start.value_or(std::vector<double>(n, 1.0));
    if (x.size() != n || std::any_of(x.begin(), x.end(), [](double v) { return !(v > 0.0); }))
    {
        throw Error(ErrorCode::invalid_argument, "perron_weights: start vector must be positive with dimension S");
    }
    {
        double s = 0.0;
        for (double v : x)
        {
            s += v;
        }
        for (double& v : x)
        {
            v /= s;
        }
    }

    std::vector<double> y(n);
    std::vector<double> sums(n);
    double lambda_star = 0.0;
    std::size_t it = 0;
    bool converged = false;
    while (it < opts.max_iterations)
    {
        ++it;
        kern.matvec(cprime.data().data(), n, x.data(), y.data());
        double total = 0.0;
        for (double v : y)
        {
            total += v;
        }
        lambda_star = total;  // sum(C'x) / sum(x), sum(x) == 1
        double change = 0.0;
        for (std::size_t i = 0; i < n; ++i)
        {
            const double xn = y[i] / total;
            change += std::abs(xn - x[i]);
            x[i] = xn;
        }
        if (change <= opts.tolerance)
        {
            if (std::any_of(x.begin(), x.end(), [](double v) { return !(v > 0.0); }))
            {
                break;
            }
            const SquareMatrix weighted = apply_weights(bstar, WeightVector(x));
            kern.column_sums(weighted.data().data(), n, n, sums.data());
            const double lambda0 = lambda_star - shift;
            const double allowed = std::abs(lambda0) > 1e-12 * m ? opts.equalization_tolerance * std::abs(lambda0)
                                                                 : 1e-12;
            out.column_sum_spread = spread(sums);
            if (out.column_sum_spread <= allowed)
            {
                converged = true;
                break;
            }
        }
    }
    if (!converged)
    {
        std::ostringstream os;
        os << "perron_weights: no convergence after " << it << " iterations (column-sum spread "
           << out.column_sum_spread << ")";
        throw Error(ErrorCode::not_converged, os.str());
    }

    kern.matvec(cprime.data().data(), n, x.data(), y.data());
    double residual = 0.0;
    for (std::size_t i = 0; i < n; ++i)
    {
        residual += std::abs(y[i] - lambda_star * x[i]);
    }

    out.lambda0 = lambda_star - shift;
    out.weights = WeightVector(x);
    out.iterations = it;
    out.residual = residual;
    return out;
}

ConditionReport check_sharpness_conditions(const ChainSpec& spec)
{
    if (spec.kind() == ChainKind::general)
    {
        throw Error(ErrorCode::invalid_argument, "sharpness conditions are defined for classes I-IV only");
    }
    if (!spec.homogeneous())
    {
        throw Error(ErrorCode::inhomogeneous, "sharpness conditions require a homogeneous chain");
    }
    ConditionReport rep;
    auto all_positive = [&rep](const std::vector<RateFunction>& v, const char* what, std::size_t offset) {
        for (std::size_t i = 0; i < v.size(); ++i)
        {
            if (!(v[i](0.0) > 0.0))
            {
                rep.failures.push_back(std::string(what) + "_" + std::to_string(i + offset) + " > 0");
            }
        }
    };
    auto strictly_smaller = [&rep](const std::vector<RateFunction>& v, const char* what) {
        if (v.size() >= 2 && !(v[1](0.0) < v[0](0.0)))
        {
            rep.failures.push_back(std::string(what) + "_2 < " + what + "_1");
        }
    };

    switch (spec.kind())
    {
    case ChainKind::birth_death:
        all_positive(spec.lambda(), "lambda", 0);
        all_positive(spec.mu(), "mu", 1);
        break;
    case ChainKind::batch_birth:
        all_positive(spec.mu(), "mu", 1);
        strictly_smaller(spec.a(), "a");
        break;
    case ChainKind::batch_death:
        all_positive(spec.lambda(), "lambda", 0);
        strictly_smaller(spec.b(), "b");
        break;
    case ChainKind::batch_both:
        strictly_smaller(spec.a(), "a");
        strictly_smaller(spec.b(), "b");
        break;
    case ChainKind::general:
        break;
    }
    rep.pass = rep.failures.empty();
    return rep;
}

ClosedFormRates closed_form_bd(double a, double b, std::size_t S)
{
    if (!(a > 0.0) || !(b > 0.0) || S < 1)
    {
        throw Error(ErrorCode::invalid_argument, "closed_form_bd: need a > 0, b > 0, S >= 1");
    }
    const double c = 2.0 * std::sqrt(a * b) * std::cos(std::numbers::pi / static_cast<double>(S + 1));
    return {a + b - c, a + b + c};
}

namespace
{

double dominant_eigenvalue(const SquareMatrix& m, Rng& rng, double tol, std::size_t max_it)
{
    const std::size_t n = m.dim();
    std::vector<double> x(n);
    for (double& v : x)
    {
        v = rng.uniform(-1.0, 1.0);
    }
    auto normalize = [](std::vector<double>& v) {
        double s = 0.0;
        for (double e : v)
        {
            s += e * e;
        }
        s = std::sqrt(s);
        for (double& e : v)
        {
            e /= s;
        }
    };
    normalize(x);
    double lambda = 0.0;
    int stable = 0;
    for (std::size_t it = 0; it < max_it; ++it)
    {
        const Vector y = m * x;
        double rq = 0.0;
        for (std::size_t i = 0; i < n; ++i)
        {
            rq += x[i] * y[i];
        }
        const bool small_change = std::abs(rq - lambda) <= tol * std::max(1.0, std::abs(rq));
        lambda = rq;
        stable = small_change ? stable + 1 : 0;
        if (stable >= 3)
        {
            return lambda;
        }
        x = y;
        normalize(x);
    }
    throw Error(ErrorCode::not_converged, "extreme_eigenvalues: power iteration did not converge");
}

}  // namespace

SpectrumExtremes extreme_eigenvalues(const SquareMatrix& m, std::uint64_t seed, double tolerance,
                                     std::size_t max_iterations)
{
    const std::size_t n = m.dim();
    if (n == 0)
    {
        throw Error(ErrorCode::invalid_argument, "extreme_eigenvalues: empty matrix");
    }
    Rng rng(seed);
    double sigma = 0.0;
    for (std::size_t i = 0; i < n; ++i)
    {
        double s = 0.0;
        for (double v : m.row(i))
        {
            s += std::abs(v);
        }
        sigma = std::max(sigma, s);
    }
    SpectrumExtremes out;
    out.largest = dominant_eigenvalue(m, rng, tolerance, max_iterations);
    SquareMatrix shifted(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        for (std::size_t j = 0; j < n; ++j)
        {
            shifted(i, j) = (i == j ? sigma : 0.0) - m(i, j);
        }
    }
    out.smallest = sigma - dominant_eigenvalue(shifted, rng, tolerance, max_iterations);
    return out;
}

}  // namespace ergobound
