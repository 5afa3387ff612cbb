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

#include "ergobound/rate_function.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ergobound/error.hpp"

namespace ergobound
{

namespace
{

void require_finite(double v, const char* what)
{
    if (!std::isfinite(v))
    {
        throw Error(ErrorCode::invalid_argument, std::string("rate function: non-finite ") + what);
    }
}

struct Evaluator
{
    double t;

    double operator()(const RateFunction::Constant& c) const { return c.value; }

    double operator()(const RateFunction::Sinusoid& s) const
    {
        return s.offset + s.amplitude * std::sin(2.0 * std::numbers::pi * s.frequency * t + s.phase);
    }

    double operator()(const RateFunction::Table& tab) const
    {
        const auto& x = tab.times;
        const auto& y = tab.values;
        if (t <= x.front())
        {
            return y.front();
        }
        if (t >= x.back())
        {
            return y.back();
        }
        const auto hi = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), t) - x.begin());
        const std::size_t lo = hi - 1;
        if (t == x[lo])
        {
            return y[lo];
        }
        const double w = (t - x[lo]) / (x[hi] - x[lo]);
        return y[lo] + w * (y[hi] - y[lo]);
    }
};

}  // namespace

RateFunction RateFunction::constant(double value)
{
    require_finite(value, "constant");
    if (value < 0.0)
    {
        throw Error(ErrorCode::invalid_argument, "rate function: negative constant");
    }
    return RateFunction(Constant{value});
}

RateFunction RateFunction::sinusoid(double offset, double amplitude, double frequency, double phase)
{
    require_finite(offset, "offset");
    require_finite(amplitude, "amplitude");
    require_finite(frequency, "frequency");
    require_finite(phase, "phase");
    return RateFunction(Sinusoid{offset, amplitude, frequency, phase});
}

RateFunction RateFunction::table(std::vector<double> times, std::vector<double> values)
{
    if (times.size() != values.size() || times.size() < 2)
    {
        throw Error(ErrorCode::invalid_argument,
                    "rate table: need at least 2 breakpoints and equal-length value list");
    }
    for (std::size_t i = 0; i < times.size(); ++i)
    {
        require_finite(times[i], "table time");
        require_finite(values[i], "table value");
        if (values[i] < 0.0)
        {
            throw Error(ErrorCode::invalid_argument, "rate table: negative value");
        }
        if (i > 0 && !(times[i] > times[i - 1]))
        {
            throw Error(ErrorCode::invalid_argument, "rate table: breakpoints not strictly increasing");
        }
    }
    return RateFunction(Table{std::move(times), std::move(values)});
}

double RateFunction::operator()(double t) const
{
    const double r = std::visit(Evaluator{t}, v_);
    if (!(r >= 0.0) || !std::isfinite(r))
    {
        std::ostringstream os;
        os << "rate evaluates to " << r << " at t=" << t;
        throw Error(ErrorCode::evaluation, os.str());
    }
    return r;
}

bool RateFunction::is_constant() const
{
    if (std::holds_alternative<Constant>(v_))
    {
        return true;
    }
    if (const auto* s = std::get_if<Sinusoid>(&v_))
    {
        return s->amplitude == 0.0 || s->frequency == 0.0;
    }
    const auto& tab = std::get<Table>(v_);
    return std::all_of(tab.values.begin(), tab.values.end(),
                       [&](double v) { return v == tab.values.front(); });
}

}  // namespace ergobound
