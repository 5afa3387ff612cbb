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

#include "ergobound/chain_model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <utility>

#include "ergobound/error.hpp"

namespace ergobound
{

namespace
{

void require_states(std::size_t S)
{
    if (S < 1)
    {
        throw Error(ErrorCode::invalid_argument, "chain needs S >= 1");
    }
}

void require_length(const std::vector<RateFunction>& v, std::size_t S, const char* name)
{
    if (v.size() != S)
    {
        throw Error(ErrorCode::invalid_argument, std::string("rate list '") + name + "' has length " +
                                                     std::to_string(v.size()) + ", expected S=" +
                                                     std::to_string(S));
    }
}

bool all_constant(const std::vector<RateFunction>& v)
{
    return std::all_of(v.begin(), v.end(), [](const RateFunction& r) { return r.is_constant(); });
}

}  // namespace

std::string_view to_string(ChainKind kind)
{
    switch (kind)
    {
    case ChainKind::general: return "general";
    case ChainKind::birth_death: return "birth_death";
    case ChainKind::batch_birth: return "batch_birth";
    case ChainKind::batch_death: return "batch_death";
    case ChainKind::batch_both: return "batch_both";
    }
    return "unknown";
}

std::optional<ChainKind> chain_kind_from_string(std::string_view name)
{
    for (auto k : {ChainKind::general, ChainKind::birth_death, ChainKind::batch_birth,
                   ChainKind::batch_death, ChainKind::batch_both})
    {
        if (to_string(k) == name)
        {
            return k;
        }
    }
    return std::nullopt;
}

ChainSpec ChainSpec::birth_death(std::size_t S, std::vector<RateFunction> lambda,
                                 std::vector<RateFunction> mu)
{
    require_states(S);
    require_length(lambda, S, "lambda");
    require_length(mu, S, "mu");
    ChainSpec spec(ChainKind::birth_death, S);
    spec.lambda_ = std::move(lambda);
    spec.mu_ = std::move(mu);
    return spec;
}

ChainSpec ChainSpec::batch_birth(std::size_t S, std::vector<RateFunction> a,
                                 std::vector<RateFunction> mu)
{
    require_states(S);
    require_length(a, S, "a");
    require_length(mu, S, "mu");
    ChainSpec spec(ChainKind::batch_birth, S);
    spec.a_ = std::move(a);
    spec.mu_ = std::move(mu);
    return spec;
}

ChainSpec ChainSpec::batch_death(std::size_t S, std::vector<RateFunction> b,
                                 std::vector<RateFunction> lambda)
{
    require_states(S);
    require_length(b, S, "b");
    require_length(lambda, S, "lambda");
    ChainSpec spec(ChainKind::batch_death, S);
    spec.b_ = std::move(b);
    spec.lambda_ = std::move(lambda);
    return spec;
}

ChainSpec ChainSpec::batch_both(std::size_t S, std::vector<RateFunction> a,
                                std::vector<RateFunction> b)
{
    require_states(S);
    require_length(a, S, "a");
    require_length(b, S, "b");
    ChainSpec spec(ChainKind::batch_both, S);
    spec.a_ = std::move(a);
    spec.b_ = std::move(b);
    return spec;
}

ChainSpec ChainSpec::general(std::size_t S, std::vector<Transition> transitions)
{
    require_states(S);
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto& tr : transitions)
    {
        if (tr.from > S || tr.to > S || tr.from == tr.to)
        {
            throw Error(ErrorCode::invalid_argument,
                        "transition " + std::to_string(tr.from) + "->" + std::to_string(tr.to) +
                            " is out of range or a self loop");
        }
        if (!seen.emplace(tr.from, tr.to).second)
        {
            throw Error(ErrorCode::invalid_argument, "duplicate transition " + std::to_string(tr.from) +
                                                         "->" + std::to_string(tr.to));
        }
    }
    ChainSpec spec(ChainKind::general, S);
    spec.transitions_ = std::move(transitions);
    return spec;
}

bool ChainSpec::homogeneous() const
{
    return all_constant(lambda_) && all_constant(mu_) && all_constant(a_) && all_constant(b_) &&
           std::all_of(transitions_.begin(), transitions_.end(),
                       [](const Transition& tr) { return tr.rate.is_constant(); });
}

std::vector<RateFunction> constant_rates(std::span<const double> values)
{
    std::vector<RateFunction> out;
    out.reserve(values.size());
    for (double v : values)
    {
        out.push_back(RateFunction::constant(v));
    }
    return out;
}

std::vector<RateFunction> constant_rates(std::initializer_list<double> values)
{
    return constant_rates(std::span<const double>(values.begin(), values.size()));
}

SquareMatrix eval_generator(const ChainSpec& spec, double t)
{
    if (!std::isfinite(t))
    {
        throw Error(ErrorCode::invalid_argument, "eval_generator: non-finite time");
    }
    const std::size_t S = spec.states();
    SquareMatrix q(S + 1);

    switch (spec.kind())
    {
    case ChainKind::general:
        for (const auto& tr : spec.transitions())
        {
            q(tr.from, tr.to) = tr.rate(t);
        }
        break;
    case ChainKind::birth_death:
        for (std::size_t i = 0; i < S; ++i)
        {
            q(i, i + 1) = spec.lambda()[i](t);
            q(i + 1, i) = spec.mu()[i](t);
        }
        break;
    case ChainKind::batch_birth:
    case ChainKind::batch_death:
    case ChainKind::batch_both:
    {
        // Group sizes k = 1..S, evaluated once per time.
        std::vector<double> up(S, 0.0);
        std::vector<double> down(S, 0.0);
        if (spec.kind() != ChainKind::batch_death)
        {
            for (std::size_t k = 0; k < S; ++k)
            {
                up[k] = spec.a()[k](t);
            }
        }
        if (spec.kind() != ChainKind::batch_birth)
        {
            for (std::size_t k = 0; k < S; ++k)
            {
                down[k] = spec.b()[k](t);
            }
        }
        for (std::size_t i = 0; i <= S; ++i)
        {
            for (std::size_t k = 1; i + k <= S; ++k)
            {
                q(i, i + k) = up[k - 1];
                q(i + k, i) = down[k - 1];
            }
        }
        if (spec.kind() == ChainKind::batch_birth)
        {
            for (std::size_t i = 0; i < S; ++i)
            {
                q(i + 1, i) = spec.mu()[i](t);
            }
        }
        if (spec.kind() == ChainKind::batch_death)
        {
            for (std::size_t i = 0; i < S; ++i)
            {
                q(i, i + 1) = spec.lambda()[i](t);
            }
        }
        break;
    }
    }

    for (std::size_t i = 0; i <= S; ++i)
    {
        double s = 0.0;
        for (std::size_t j = 0; j <= S; ++j)
        {
            if (j != i)
            {
                s += q(i, j);
            }
        }
        q(i, i) = -s;
    }
    return q;
}

SquareMatrix eval_transposed(const ChainSpec& spec, double t)
{
    return eval_generator(spec, t).transposed();
}

RegularityReport check_regularity(const ChainSpec& spec, std::span<const double> grid)
{
    RegularityReport report;
    report.grid_points = grid.size();
    const std::size_t S = spec.states();
    for (double t : grid)
    {
        const SquareMatrix q = eval_generator(spec, t);
        for (std::size_t i = 0; i <= S; ++i)
        {
            for (std::size_t k = 1; i + k + 1 <= S; ++k)
            {
                const double up_k = q(i, i + k);
                const double up_next = q(i, i + k + 1);
                if (up_next > up_k)
                {
                    report.violations.push_back({t, i, k, true, up_k, up_next});
                }
                const double down_k = q(i + k, i);
                const double down_next = q(i + k + 1, i);
                if (down_next > down_k)
                {
                    report.violations.push_back({t, i, k, false, down_k, down_next});
                }
            }
        }
    }
    report.regular = report.violations.empty();
    return report;
}

std::vector<double> uniform_grid(double horizon, std::size_t n)
{
    if (n <= 1)
    {
        return {0.0};
    }
    std::vector<double> g(n);
    const double denom = static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i)
    {
        g[i] = horizon * static_cast<double>(i) / denom;
    }
    g.back() = horizon;
    return g;
}

}  // namespace ergobound
