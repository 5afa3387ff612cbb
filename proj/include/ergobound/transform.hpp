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

#ifndef ERGOBOUND_TRANSFORM_HPP
#define ERGOBOUND_TRANSFORM_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "ergobound/chain_model.hpp"
#include "ergobound/matrix.hpp"

namespace ergobound
{

/// Positive diagonal scaling d_1..d_S of the transformed coordinates.
class WeightVector
{
public:
    explicit WeightVector(std::vector<double> d);
    static WeightVector ones(std::size_t n);

    std::size_t size() const noexcept { return d_.size(); }
    double operator[](std::size_t i) const { return d_[i]; }
    std::span<const double> values() const noexcept { return d_; }

    /// Rescaled so that d_1 == 1.
    WeightVector normalized_first() const;

    friend bool operator==(const WeightVector&, const WeightVector&) = default;

private:
    std::vector<double> d_;
};

/// T (upper triangular ones) and its inverse (unit diagonal, -1 on the
/// first superdiagonal).
struct TransformPair
{
    SquareMatrix forward;
    SquareMatrix inverse;

    static TransformPair build(std::size_t S);
};

/// (T x)_i = sum_{j >= i} x_j
Vector apply_t(std::span<const double> x);

/// w = D T y
Vector to_weighted(std::span<const double> y, const WeightVector& d);

/// Reduced matrix of dz/dt = B z + f: b_ij = a_ij - a_i0, i, j = 1..S,
/// from the transposed generator A (dimension S+1).
SquareMatrix reduce(const SquareMatrix& A);

SquareMatrix build_reduced(const ChainSpec& spec, double t);

/// B* = T B T^{-1}, formed without a general product:
///   (B T^{-1})_{kj} = B_{kj} - B_{k,j-1}  (B_{k,0} = 0)
///   (T M)_{ij}      = sum_{k >= i} M_{kj}
/// so B*_{ij} = sum_{k >= i} (B_{kj} - B_{k,j-1}).
SquareMatrix to_bstar(const SquareMatrix& B);

/// B*(t) for a chain, via build_reduced and to_bstar.
SquareMatrix bstar_at(const ChainSpec& spec, double t);

/// Closed-form B* of classes I-IV, assembled directly from the rate lists.
/// Independent of reduce/to_bstar; throws for ChainKind::general.
SquareMatrix analytic_bstar(const ChainSpec& spec, double t);

struct NonnegViolation
{
    std::size_t i = 0;  // 0-based
    std::size_t j = 0;
    double value = 0.0;
};

struct NonnegReport
{
    bool pass = true;
    double min_offdiag = 0.0;  // +inf for 1x1
    double tolerance = 0.0;    // absolute threshold applied
    std::vector<NonnegViolation> violations;
};

constexpr double kDefaultRelTol = 1e-12;

/// Off-diagonal entries must be >= -rel_tol * max|entry|.
NonnegReport check_essential_nonnegativity(const SquareMatrix& m, double rel_tol = kDefaultRelTol);

/// B** = D B* D^{-1}: entry (i,j) scaled by d_i / d_j.
SquareMatrix apply_weights(const SquareMatrix& bstar, const WeightVector& d);

}  // namespace ergobound

#endif  // ERGOBOUND_TRANSFORM_HPP
