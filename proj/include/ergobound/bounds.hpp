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

#ifndef ERGOBOUND_BOUNDS_HPP
#define ERGOBOUND_BOUNDS_HPP

#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "ergobound/chain_model.hpp"
#include "ergobound/kernels.hpp"
#include "ergobound/spectral.hpp"
#include "ergobound/transform.hpp"

namespace ergobound
{

/// Two-sided exponential envelopes for ||w(t)||_1 with w = D T y:
///   ||w(t)|| <= exp(I_upper(t)) ||w(0)||          for every w(0)
///   ||w(t)|| >= exp(I_lower(t)) ||w(0)||          for w(0) >= 0
/// where I_upper/I_lower integrate the max/min column sums of B**(t).
struct BoundReport
{
    double horizon = 0.0;
    std::vector<double> grid;
    std::vector<double> h_upper;
    std::vector<double> h_lower;
    std::vector<double> integral_upper;
    std::vector<double> integral_lower;
    WeightVector weights{std::vector<double>{1.0}};
    bool sharp = false;
    std::optional<double> lambda0;
    std::optional<SharpRate> perron;  // set by sharp_report
    std::vector<std::string> warnings;

    double envelope_upper(std::size_t i) const;
    double envelope_lower(std::size_t i) const;
};

/// Cumulative composite Simpson on a uniform grid with spacing h. Even
/// indices are pure Simpson; odd indices add a third-order half-panel
/// correction. out[0] == 0.
std::vector<double> cumulative_simpson(std::span<const double> f, double h);

/// Evaluates B**(t) on n_grid uniform points over [0, horizon] (n_grid is
/// rounded up to an odd count) and integrates the column-sum extremes.
/// Throws ErrorCode::not_nonnegative if B*(t) fails essential
/// non-negativity at a grid time; a failed regularity check alone only adds
/// a warning.
BoundReport compute_bounds(const ChainSpec& spec, const WeightVector& d, double horizon,
                           std::size_t n_grid, const kernels::Table& k = kernels::best());

struct SharpOptions
{
    double horizon = 1.0;
    std::size_t n_grid = 1001;
    bool enforce_conditions = true;  // throw when the class hypotheses fail
    PowerIterationOptions power;
};

/// Perron weights for a homogeneous chain, then compute_bounds with them.
/// Both column-sum extremes equal lambda0, so the envelopes coincide.
BoundReport sharp_report(const ChainSpec& spec, const SharpOptions& opts = {});

/// Columns: t,h_upper,h_lower,I_upper,I_lower,env_upper,env_lower
void write_csv(const BoundReport& report, std::ostream& os);

}  // namespace ergobound

#endif  // ERGOBOUND_BOUNDS_HPP
