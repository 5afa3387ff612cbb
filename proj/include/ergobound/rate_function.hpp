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

#ifndef ERGOBOUND_RATE_FUNCTION_HPP
#define ERGOBOUND_RATE_FUNCTION_HPP

#include <variant>
#include <vector>

namespace ergobound
{

/// A transition intensity r(t) >= 0 (units 1/time). Three declarative
/// variants only; evaluation throws ErrorCode::evaluation when the value at
/// the queried time is negative or non-finite.
class RateFunction
{
public:
    struct Constant
    {
        double value = 0.0;
        friend bool operator==(const Constant&, const Constant&) = default;
    };

    /// offset + amplitude * sin(2*pi*frequency*t + phase)
    struct Sinusoid
    {
        double offset = 0.0;
        double amplitude = 0.0;
        double frequency = 0.0;
        double phase = 0.0;
        friend bool operator==(const Sinusoid&, const Sinusoid&) = default;
    };

    /// Piecewise linear through (times[i], values[i]); clamped outside.
    struct Table
    {
        std::vector<double> times;
        std::vector<double> values;
        friend bool operator==(const Table&, const Table&) = default;
    };

    using Variant = std::variant<Constant, Sinusoid, Table>;

    RateFunction() = default;  // constant zero

    static RateFunction constant(double value);
    static RateFunction sinusoid(double offset, double amplitude, double frequency,
                                 double phase = 0.0);
    static RateFunction table(std::vector<double> times, std::vector<double> values);

    double operator()(double t) const;

    /// True when the value does not depend on t.
    bool is_constant() const;

    const Variant& variant() const noexcept { return v_; }

    friend bool operator==(const RateFunction&, const RateFunction&) = default;

private:
    explicit RateFunction(Variant v) : v_(std::move(v)) {}

    Variant v_{Constant{}};
};

}  // namespace ergobound

#endif  // ERGOBOUND_RATE_FUNCTION_HPP
