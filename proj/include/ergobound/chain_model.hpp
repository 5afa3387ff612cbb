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

#ifndef ERGOBOUND_CHAIN_MODEL_HPP
#define ERGOBOUND_CHAIN_MODEL_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ergobound/matrix.hpp"
#include "ergobound/rate_function.hpp"

namespace ergobound
{

enum class ChainKind
{
    general,
    birth_death,  // single births lambda_i (i -> i+1), single deaths mu_i (i -> i-1)
    batch_birth,  // group births a_k (i -> i+k), single deaths mu_i
    batch_death,  // group deaths b_k (i+k -> i), single births lambda_i
    batch_both,   // group births a_k, group deaths b_k
};

std::string_view to_string(ChainKind kind);
std::optional<ChainKind> chain_kind_from_string(std::string_view name);

/// One entry q_{from,to}(t) of a general generator.
struct Transition
{
    std::size_t from = 0;
    std::size_t to = 0;
    RateFunction rate;
    friend bool operator==(const Transition&, const Transition&) = default;
};

/// Chain on states {0, ..., S}. Immutable after construction.
///
/// Rate lists, indexed from 0 in storage:
///   lambda[i] = lambda_i,   i = 0..S-1  (birth i -> i+1)
///   mu[i]     = mu_{i+1},   i = 0..S-1  (death i+1 -> i)
///   a[k]      = a_{k+1},    k = 0..S-1  (group birth of size k+1)
///   b[k]      = b_{k+1},    k = 0..S-1  (group death of size k+1)
class ChainSpec
{
public:
    static ChainSpec birth_death(std::size_t S, std::vector<RateFunction> lambda,
                                 std::vector<RateFunction> mu);
    static ChainSpec batch_birth(std::size_t S, std::vector<RateFunction> a,
                                 std::vector<RateFunction> mu);
    static ChainSpec batch_death(std::size_t S, std::vector<RateFunction> b,
                                 std::vector<RateFunction> lambda);
    static ChainSpec batch_both(std::size_t S, std::vector<RateFunction> a,
                                std::vector<RateFunction> b);
    static ChainSpec general(std::size_t S, std::vector<Transition> transitions);

    ChainKind kind() const noexcept { return kind_; }
    std::size_t states() const noexcept { return S_; }  // S; the chain has S+1 states

    const std::vector<RateFunction>& lambda() const noexcept { return lambda_; }
    const std::vector<RateFunction>& mu() const noexcept { return mu_; }
    const std::vector<RateFunction>& a() const noexcept { return a_; }
    const std::vector<RateFunction>& b() const noexcept { return b_; }
    const std::vector<Transition>& transitions() const noexcept { return transitions_; }

    /// Every contained rate is time independent.
    bool homogeneous() const;

    friend bool operator==(const ChainSpec&, const ChainSpec&) = default;

private:
    ChainSpec(ChainKind kind, std::size_t S) : kind_(kind), S_(S) {}

    ChainKind kind_ = ChainKind::general;
    std::size_t S_ = 0;
    std::vector<RateFunction> lambda_;
    std::vector<RateFunction> mu_;
    std::vector<RateFunction> a_;
    std::vector<RateFunction> b_;
    std::vector<Transition> transitions_;
};

/// Convenience: wrap plain numbers as constant rates.
std::vector<RateFunction> constant_rates(std::span<const double> values);
std::vector<RateFunction> constant_rates(std::initializer_list<double> values);

/// Generator Q(t), dimension S+1; q_ij is the intensity of i -> j and each
/// row sums to zero.
SquareMatrix eval_generator(const ChainSpec& spec, double t);

/// A(t) = Q(t)^T, the coefficient matrix of dp/dt = A p.
SquareMatrix eval_transposed(const ChainSpec& spec, double t);

struct RegularityViolation
{
    double t = 0.0;
    std::size_t i = 0;      // anchor state
    std::size_t k = 0;      // violation between jump sizes k and k+1
    bool upward = true;     // q_{i,i+k} (true) or q_{i+k,i} (false)
    double value_k = 0.0;
    double value_next = 0.0;
};

/// Non-strict reading: q_{i,i+k}(t) and q_{i+k,i}(t) must be non-increasing
/// in k. Certified only at the supplied grid times.
struct RegularityReport
{
    bool regular = true;
    std::size_t grid_points = 0;
    std::vector<RegularityViolation> violations;
};

RegularityReport check_regularity(const ChainSpec& spec, std::span<const double> grid);

/// n points t_i = horizon * i / (n - 1); n >= 2 (n == 1 yields {0}).
std::vector<double> uniform_grid(double horizon, std::size_t n);

}  // namespace ergobound

#endif  // ERGOBOUND_CHAIN_MODEL_HPP
