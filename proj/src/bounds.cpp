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

#include "ergobound/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ergobound/csv.hpp"
#include "ergobound/error.hpp"

namespace ergobound
{

double BoundReport::envelope_upper(std::size_t i) const { return std::exp(integral_upper[i]); }

double BoundReport::envelope_lower(std::size_t i) const { return std::exp(integral_lower[i]); }

std::vector<double> cumulative_simpson(std::span<const double> f, double h)
{
    const std::size_t n = f.size();
    std::vector<double> out(n, 0.0);
    if (n < 2)
    {
        return out;
    }
    if (n == 2)
    {
        out[1] = 0.5 * h * (f[0] + f[1]);
        return out;
    }
    for (std::size_t j = 1; j < n; ++j)
    {
        if (j % 2 == 0)
        {
            out[j] = out[j - 2] + h / 3.0 * (f[j - 2] + 4.0 * f[j - 1] + f[j]);
        }
        else if (j + 1 < n)
        {
            out[j] = out[j - 1] + h / 12.0 * (5.0 * f[j - 1] + 8.0 * f[j] - f[j + 1]);
        }
        else
        {
            out[j] = out[j - 1] + h / 12.0 * (-f[j - 2] + 8.0 * f[j - 1] + 5.0 * f[j]);
        }
    }
    return out;
}

BoundReport compute_bounds(const ChainSpec& spec, const WeightVector& d, double horizon,
                           std::size_t n_grid, const kernels::Table& k)
{
    if (!(horizon > 0.0) || !std::isfinite(horizon))
    {
        throw Error(ErrorCode::invalid_argument, "compute_bounds: horizon must be positive");
    }
    if (n_grid < 2)
    {
        throw Error(ErrorCode::invalid_argument, "compute_bounds: need at least 2 grid points");
    }
    if (d.size() != spec.states())
    {
        throw Error(ErrorCode::invalid_argument, "compute_bounds: weight count must equal S");
    }
    if (n_grid % 2 == 0)
    {
        ++n_grid;
    }

    BoundReport rep;
    rep.horizon = horizon;
    rep.weights = d;
    rep.grid = uniform_grid(horizon, n_grid);
    rep.h_upper.resize(n_grid);
    rep.h_lower.resize(n_grid);

    const bool constant = spec.homogeneous();
    bool irreducible_everywhere = true;
    for (std::size_t i = 0; i < n_grid; ++i)
    {
        if (constant && i > 0)
        {
            rep.h_upper[i] = rep.h_upper[0];
            rep.h_lower[i] = rep.h_lower[0];
            continue;
        }
        const double t = rep.grid[i];
        const SquareMatrix bstar = bstar_at(spec, t);
        const NonnegReport nn = check_essential_nonnegativity(bstar);
        if (!nn.pass)
        {
            const auto& v = nn.violations.front();
            std::ostringstream os;
            os << "B*(t) not essentially non-negative at t=" << t << ": entry (" << v.i + 1 << ","
               << v.j + 1 << ") = " << v.value;
            throw Error(ErrorCode::not_nonnegative, os.str());
        }
        irreducible_everywhere = irreducible_everywhere && check_irreducible(bstar);
        const ColumnSumBounds cs = column_sum_bounds(apply_weights(bstar, d), k);
        rep.h_upper[i] = cs.upper;
        rep.h_lower[i] = cs.lower;
    }

    const double h = horizon / static_cast<double>(n_grid - 1);
    rep.integral_upper = cumulative_simpson(rep.h_upper, h);
    rep.integral_lower = cumulative_simpson(rep.h_lower, h);
    // Exact Simpson on a constant can still drift by an ulp per panel.
    for (std::size_t i = 0; i < n_grid; ++i)
    {
        if (rep.integral_lower[i] > rep.integral_upper[i])
        {
            rep.integral_lower[i] = rep.integral_upper[i];
        }
    }

    const std::vector<double> t0{0.0};
    const RegularityReport reg = check_regularity(spec, constant ? std::span<const double>(t0) : rep.grid);
    if (!reg.regular)
    {
        rep.warnings.push_back("generator is not regular on the grid (" + std::to_string(reg.violations.size()) +
                               " violations); proceeding because B*(t) is essentially non-negative");
    }
    if (!irreducible_everywhere)
    {
        rep.warnings.push_back("B*(t) is reducible at some grid times");
    }
    return rep;
}

BoundReport sharp_report(const ChainSpec& spec, const SharpOptions& opts)
{
    if (!spec.homogeneous())
    {
        throw Error(ErrorCode::inhomogeneous, "sharp_report: chain rates depend on time");
    }
    std::vector<std::string> warnings;
    if (spec.kind() != ChainKind::general)
    {
        const ConditionReport cond = check_sharpness_conditions(spec);
        if (!cond.pass)
        {
            std::string msg = "sharpness conditions fail:";
            for (const auto& f : cond.failures)
            {
                msg += " " + f + ";";
            }
            if (opts.enforce_conditions)
            {
                throw Error(ErrorCode::conditions_not_met, msg);
            }
            warnings.push_back(msg);
        }
    }

    const SquareMatrix bstar = bstar_at(spec, 0.0);
    const SharpRate rate = perron_weights(bstar, opts.power);

    BoundReport rep = compute_bounds(spec, rate.weights, opts.horizon, opts.n_grid,
                                     opts.power.kernels != nullptr ? *opts.power.kernels : kernels::best());
    const double allowed = std::max(1e-9 * std::abs(rate.lambda0), 1e-12);
    if (std::abs(rep.h_upper.front() - rate.lambda0) > allowed ||
        std::abs(rep.h_lower.front() - rate.lambda0) > allowed)
    {
        std::ostringstream os;
        os << "sharp_report: column sums [" << rep.h_lower.front() << ", " << rep.h_upper.front()
           << "] do not match lambda0 = " << rate.lambda0;
        throw Error(ErrorCode::not_converged, os.str());
    }
    rep.sharp = true;
    rep.lambda0 = rate.lambda0;
    rep.perron = rate;
    rep.warnings.insert(rep.warnings.begin(), warnings.begin(), warnings.end());
    return rep;
}

void write_csv(const BoundReport& report, std::ostream& os)
{
    csv::write_header(os, {"t", "h_upper", "h_lower", "I_upper", "I_lower", "env_upper", "env_lower"});
    for (std::size_t i = 0; i < report.grid.size(); ++i)
    {
        csv::write_row(os, {report.grid[i], report.h_upper[i], report.h_lower[i], report.integral_upper[i],
                            report.integral_lower[i], report.envelope_upper(i), report.envelope_lower(i)});
    }
}

}  // namespace ergobound
