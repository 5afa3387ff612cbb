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

#ifndef ERGOBOUND_ODESOLVE_HPP
#define ERGOBOUND_ODESOLVE_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "ergobound/chain_model.hpp"
#include "ergobound/kernels.hpp"
#include "ergobound/matrix.hpp"
#include "ergobound/transform.hpp"

namespace ergobound
{

/// Which linear system x' = M(t) x is integrated.
enum class System
{
    forward,      // p' = A(t) p, dimension S+1
    reduced_hom,  // y' = B(t) y, dimension S
    transformed,  // w' = B**(t) w, dimension S (needs weights)
};

std::string_view to_string(System system);

std::size_t system_dimension(System system, const ChainSpec& spec);

SquareMatrix system_matrix(System system, const ChainSpec& spec, const WeightVector* weights, double t);

/// Values above this magnitude abort integration with ErrorCode::blow_up.
constexpr double kBlowUpThreshold = 1e12;

/// Classical RK4 with fixed step horizon / n_steps on a block of `width`
/// independent state vectors sharing one coefficient matrix. The block is
/// stored row-major (dimension rows x width columns), so the per-stage
/// product vectorizes across trials. Grid times are horizon * k / n_steps.
class BlockStepper
{
public:
    BlockStepper(System system, const ChainSpec& spec, std::optional<WeightVector> weights,
                 std::vector<double> block, std::size_t width, double horizon, std::size_t n_steps,
                 const kernels::Table& k = kernels::best());

    void advance();

    std::size_t step() const noexcept { return step_; }
    std::size_t steps() const noexcept { return n_steps_; }
    double time() const noexcept { return time_at(step_); }
    double time_at(std::size_t k) const;
    std::size_t dimension() const noexcept { return dim_; }
    std::size_t width() const noexcept { return width_; }

    /// Entry (component i, column c) is state()[i * width() + c].
    std::span<const double> state() const noexcept { return x_; }

private:
    SquareMatrix matrix_at(double t) const;
    void apply(const SquareMatrix& m, const double* in, double* out) const;

    System system_;
    ChainSpec spec_;
    std::optional<WeightVector> weights_;
    const kernels::Table& k_;
    std::size_t dim_;
    std::size_t width_;
    double horizon_;
    std::size_t n_steps_;
    std::size_t step_ = 0;
    bool constant_;

    std::vector<double> x_;
    std::vector<double> tmp_, k1_, k2_, k3_, k4_;
    SquareMatrix m_start_;  // M(t_step), reused as the next step's start
};

struct Trajectory
{
    System coordinates = System::forward;
    std::vector<double> grid;
    std::vector<Vector> states;
};

Trajectory solve(System system, const ChainSpec& spec, const std::optional<WeightVector>& weights,
                 std::span<const double> x0, double horizon, std::size_t n_steps,
                 const kernels::Table& k = kernels::best());

struct VerifyOptions
{
    double horizon = 1.0;
    std::size_t n_steps = 10'000;  // rounded up to even so the bound grid aligns
    std::size_t trials = 100;      // bounds: trials; coupling: pairs
    std::uint64_t seed = 1;
    double slack = 1e-8;           // relative, on top of the integrator margin
    std::size_t jobs = 1;
    const kernels::Table* kernels = nullptr;
};

struct VerificationViolation
{
    std::size_t trial = 0;
    double t = 0.0;
    double ratio = 0.0;
    double allowed = 0.0;
    bool upper = true;
};

/// Per-grid-time extremes over trials, plus the worst cases. Ratios are
/// ||w(t)|| / (exp(I(t)) ||w(0)||) from the n_steps run; the margin at each
/// time is twice the step-halving difference of the ratio plus twice the
/// quadrature difference of the exponent.
struct VerificationReport
{
    std::string_view kind;  // "bounds" or "coupling"
    std::uint64_t seed = 0;
    std::size_t trials = 0;
    std::size_t n_steps = 0;
    double horizon = 0.0;
    double slack = 0.0;

    std::vector<double> grid;
    std::vector<double> max_upper_ratio;
    std::vector<double> min_lower_ratio;  // nonnegative starts only; empty for coupling
    std::vector<double> margin;

    double max_integrator_margin = 0.0;
    double nonneg_max_upper_ratio = 0.0;  // over nonnegative starts
    double nonneg_min_lower_ratio = 0.0;
    double min_nonneg_component = 0.0;    // nonnegativity propagation (bounds)
    double max_mass_defect = 0.0;         // |sum p - 1| (coupling)
    double min_probability = 0.0;         // (coupling)

    std::size_t violations = 0;
    std::optional<VerificationViolation> first_violation;
    std::optional<VerificationViolation> worst_upper;
    std::optional<VerificationViolation> worst_lower;

    bool passed() const noexcept { return violations == 0; }
};

/// Random signed w(0) (upper envelope) and nonnegative w(0) (both
/// envelopes) per trial, integrated in the transformed coordinates.
VerificationReport verify_bounds(const ChainSpec& spec, const WeightVector& weights, const VerifyOptions& opts);

using DistributionPair = std::pair<Vector, Vector>;

/// Pairs of initial distributions integrated in the forward equation; the
/// weighted tail-sum difference D T (z1 - z2) is checked against the upper
/// envelope. Random pairs are drawn when `pairs` is empty.
VerificationReport verify_convergence_coupling(const ChainSpec& spec, const WeightVector& weights,
                                               const VerifyOptions& opts,
                                               std::span<const DistributionPair> pairs = {});

/// Columns: t,bounds_max_upper_ratio,bounds_min_lower_ratio,bounds_margin,
/// coupling_max_upper_ratio,coupling_margin. Both reports must share a grid.
void write_verification_csv(const VerificationReport& bounds, const VerificationReport& coupling,
                            std::ostream& os);

}  // namespace ergobound

#endif  // ERGOBOUND_ODESOLVE_HPP
