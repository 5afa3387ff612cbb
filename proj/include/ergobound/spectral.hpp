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

#ifndef ERGOBOUND_SPECTRAL_HPP
#define ERGOBOUND_SPECTRAL_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ergobound/chain_model.hpp"
#include "ergobound/kernels.hpp"
#include "ergobound/matrix.hpp"
#include "ergobound/transform.hpp"

namespace ergobound
{

/// Extremal column sums of an essentially non-negative matrix; these are
/// the growth exponents of the l1 norm of solutions of w' = B** w.
struct ColumnSumBounds
{
    double upper = 0.0;  // h**: max column sum
    double lower = 0.0;  // h_**: min column sum
    std::vector<double> column_sums;
};

ColumnSumBounds column_sum_bounds(const SquareMatrix& m,
                                  const kernels::Table& k = kernels::best());

struct PowerIterationOptions
{
    double tolerance = 1e-14;             // l1 change of the normalized iterate
    std::size_t max_iterations = 1'000'000;
    double equalization_tolerance = 1e-9; // relative spread of the column sums
    std::optional<std::vector<double>> start;  // positive; default uniform
    const kernels::Table* kernels = nullptr;   // default kernels::best()
};

/// Perron weighting of an essentially non-negative irreducible B*.
struct SharpRate
{
    double lambda0 = 0.0;  // common column sum of D B* D^{-1} = max real eigenvalue of B*
    WeightVector weights{std::vector<double>{1.0}};
    std::size_t iterations = 0;
    double residual = 0.0;  // ||C' x - lambda* x||_1
    double shift = 0.0;     // diagonal shift used to form C' = B*^T + shift I
    double column_sum_spread = 0.0;
};

/// Power iteration on C' = B*^T + s I, s = 1.5 max|b*_jj| (1 if that is 0).
/// The positive eigenvector x of C' is the left Perron vector of B*, and
/// d = x equalizes every column sum of D B* D^{-1} at lambda0.
/// Throws ErrorCode::not_nonnegative, ::reducible, ::not_converged.
SharpRate perron_weights(const SquareMatrix& bstar, const PowerIterationOptions& opts = {});

/// Strong connectivity of the graph with edge i -> j when i != j and
/// m(i,j) > rel_tol * max|m|.
bool check_irreducible(const SquareMatrix& m, double rel_tol = kDefaultRelTol);

struct ConditionReport
{
    bool pass = true;
    std::vector<std::string> failures;
};

/// Hypotheses under which a homogeneous class I-IV chain admits equalizing
/// weights: positive single-step rates and a_2 < a_1, b_2 < b_1 (strict).
/// Throws ErrorCode::inhomogeneous for time-dependent rates and
/// ErrorCode::invalid_argument for general chains.
ConditionReport check_sharpness_conditions(const ChainSpec& spec);

/// Constant-rate birth-death chain (lambda_k = a, mu_k = b):
///   beta* = a + b - 2 sqrt(ab) cos(pi / (S+1))   (sharp decay rate, = -lambda0)
///   g*    = a + b + 2 sqrt(ab) cos(pi / (S+1))
struct ClosedFormRates
{
    double beta_star = 0.0;
    double g_star = 0.0;
};

ClosedFormRates closed_form_bd(double a, double b, std::size_t S);

/// Smallest and largest eigenvalue of a matrix whose spectrum is real and
/// non-negative (e.g. -B* of a constant birth-death chain). Plain power
/// iteration on m and on (sigma I - m), sigma = max absolute row sum.
struct SpectrumExtremes
{
    double smallest = 0.0;
    double largest = 0.0;
};

SpectrumExtremes extreme_eigenvalues(const SquareMatrix& m, std::uint64_t seed = 1,
                                     double tolerance = 1e-15,
                                     std::size_t max_iterations = 1'000'000);

}  // namespace ergobound

#endif  // ERGOBOUND_SPECTRAL_HPP
