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


#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "ergobound/bounds.hpp"
#include "ergobound/error.hpp"
#include "ergobound/odesolve.hpp"
#include "support/random_chains.hpp"

using namespace ergobound;

namespace
{

const ChainSpec two_state = ChainSpec::birth_death(1, constant_rates({1}), constant_rates({2}));

ChainSpec unit_bd(std::size_t S)
{
    return ChainSpec::birth_death(S, constant_rates(std::vector<double>(S, 1.0)),
                                  constant_rates(std::vector<double>(S, 1.0)));
}

ChainSpec sinusoid_bd(std::size_t S)
{
    return ChainSpec::birth_death(S, std::vector<RateFunction>(S, RateFunction::sinusoid(1, 1, 1)),
                                  constant_rates(std::vector<double>(S, 1.0)));
}

double p1_exact(double t) { return (1.0 - std::exp(-3.0 * t)) / 3.0; }

}  // namespace

TEST_CASE("two-state forward solution")
{
    const auto traj = solve(System::forward, two_state, std::nullopt, Vector{1.0, 0.0}, 1.0, 1000);
    CHECK(traj.grid.size() == 1001);
    CHECK(traj.grid.back() == 1.0);
    CHECK(std::abs(traj.states.back()[1] - p1_exact(1.0)) <= 1e-12);
    CHECK(traj.states.back()[1] == doctest::Approx(0.3167376).epsilon(1e-7));
    CHECK(traj.coordinates == System::forward);
}

TEST_CASE("RK4 is fourth order")
{
    auto err = [](std::size_t n) {
        const auto traj = solve(System::forward, two_state, std::nullopt, Vector{1.0, 0.0}, 1.0, n);
        return std::abs(traj.states.back()[1] - p1_exact(1.0));
    };
    for (std::size_t n : {10u, 20u, 40u})
    {
        const double factor = err(n) / err(2 * n);
        CAPTURE(n);
        CHECK(factor >= 8.0);
        CHECK(factor <= 32.0);
    }
}

TEST_CASE("sharp weights give an exact exponential")
{
    const auto spec = unit_bd(3);
    const auto rate = perron_weights(bstar_at(spec, 0.0));
    const Vector w0{0.2, 0.5, 0.3};
    const auto traj = solve(System::transformed, spec, rate.weights, w0, 1.0, 1000);
    CHECK(std::abs(l1_norm(traj.states.back()) - std::exp(rate.lambda0) * l1_norm(w0)) <= 1e-8);
}

TEST_CASE("zero start stays zero")
{
    const auto traj = solve(System::reduced_hom, sinusoid_bd(3), std::nullopt, Vector(3, 0.0), 2.0, 50);
    for (const auto& s : traj.states)
    {
        CHECK(l1_norm(s) == 0.0);
    }
}

TEST_CASE("forward trajectories conserve probability")
{
    Rng rng(6);
    const auto spec = ChainSpec::batch_both(
        5, {RateFunction::sinusoid(3, 2, 1), RateFunction::constant(1), RateFunction::constant(0.5),
            RateFunction::constant(0.5), RateFunction::constant(0.1)},
        constant_rates(testing::decreasing_rates(rng, 5, true)));
    const auto traj = solve(System::forward, spec, std::nullopt, Vector{0, 0, 1, 0, 0, 0}, 3.0, 3000);
    for (const auto& p : traj.states)
    {
        double mass = 0.0;
        for (double x : p)
        {
            CHECK(x >= -1e-12);
            mass += x;
        }
        CHECK(std::abs(mass - 1.0) <= 1e-10);
    }
}

TEST_CASE("reduced and transformed coordinates agree")
{
    Rng rng(10);
    const auto spec = sinusoid_bd(4);
    const WeightVector d(testing::rates(rng, 4, 2.0));
    const Vector y0{0.3, -0.2, 0.5, 0.1};
    const auto ty = solve(System::reduced_hom, spec, std::nullopt, y0, 2.0, 2000);
    const auto tw = solve(System::transformed, spec, d, to_weighted(y0, d), 2.0, 2000);
    double worst = 0.0;
    for (std::size_t k = 0; k < ty.states.size(); ++k)
    {
        const Vector w = to_weighted(ty.states[k], d);
        for (std::size_t i = 0; i < 4; ++i) worst = std::max(worst, std::abs(w[i] - tw.states[k][i]));
    }
    CHECK(worst <= 1e-9);
}

TEST_CASE("block stepper matches single-column solves")
{
    const auto spec = sinusoid_bd(3);
    const WeightVector d = WeightVector::ones(3);
    const std::size_t width = 6;
    Rng rng(1);
    std::vector<double> block(3 * width);
    for (double& x : block) x = rng.uniform(-1, 1);
    for (const kernels::Table* k : {&kernels::scalar(), kernels::avx2()})
    {
        if (k == nullptr) continue;
        BlockStepper stepper(System::transformed, spec, d, block, width, 1.0, 100, *k);
        while (stepper.step() < stepper.steps()) stepper.advance();
        CHECK(stepper.time() == 1.0);
        for (std::size_t c = 0; c < width; ++c)
        {
            const Vector x0{block[c], block[width + c], block[2 * width + c]};
            const auto single = solve(System::transformed, spec, d, x0, 1.0, 100, kernels::scalar());
            for (std::size_t i = 0; i < 3; ++i)
            {
                CHECK(std::abs(stepper.state()[i * width + c] - single.states.back()[i]) <= 1e-14);
            }
        }
    }
}

TEST_CASE("integrator guards")
{
    CHECK_THROWS_AS(solve(System::forward, two_state, std::nullopt, Vector{1.0}, 1.0, 10), Error);
    CHECK_THROWS_AS(solve(System::forward, two_state, std::nullopt, Vector{1.0, 0.0}, 1.0, 0), Error);
    CHECK_THROWS_AS(solve(System::transformed, two_state, std::nullopt, Vector{1.0}, 1.0, 10), Error);

    // Rates far beyond the RK4 stability limit of one step per unit time.
    const auto stiff = ChainSpec::birth_death(1, constant_rates({1e4}), constant_rates({1e4}));
    try
    {
        solve(System::forward, stiff, std::nullopt, Vector{1.0, 0.0}, 10.0, 10);
        FAIL("expected blow-up");
    }
    catch (const Error& e)
    {
        CHECK(e.code() == ErrorCode::blow_up);
    }

    const auto dip = ChainSpec::birth_death(1, {RateFunction::sinusoid(0.5, 1, 1)}, constant_rates({1}));
    try
    {
        solve(System::forward, dip, std::nullopt, Vector{1.0, 0.0}, 1.0, 10);
        FAIL("expected evaluation error");
    }
    catch (const Error& e)
    {
        CHECK(e.code() == ErrorCode::evaluation);
    }
}

TEST_CASE("verification with sharp weights: both ratios are one")
{
    const auto spec = unit_bd(3);
    const auto rate = perron_weights(bstar_at(spec, 0.0));
    VerifyOptions opts;
    opts.horizon = 2.0;
    opts.n_steps = 2000;
    opts.trials = 30;
    const auto rep = verify_bounds(spec, rate.weights, opts);
    CHECK(rep.passed());
    CHECK(rep.trials == 30);
    CHECK(std::abs(rep.nonneg_max_upper_ratio - 1.0) <= 1e-6);
    CHECK(std::abs(rep.nonneg_min_lower_ratio - 1.0) <= 1e-6);
    CHECK(rep.min_nonneg_component >= -1e-10);
    CHECK(rep.max_integrator_margin <= 1e-8);
}

TEST_CASE("verification on a time-varying chain")
{
    VerifyOptions opts;
    opts.horizon = 3.0;
    opts.n_steps = 3000;
    opts.trials = 200;
    const auto rep = verify_bounds(sinusoid_bd(5), WeightVector::ones(5), opts);
    CHECK(rep.passed());
    CHECK(rep.violations == 0);
    CHECK(rep.grid.size() == 3001);
    CHECK(rep.min_nonneg_component >= -1e-10);
    for (std::size_t k = 0; k < rep.grid.size(); ++k)
    {
        CHECK(rep.max_upper_ratio[k] <= 1.0 + opts.slack + rep.margin[k]);
        CHECK(rep.min_lower_ratio[k] >= 1.0 - opts.slack - rep.margin[k]);
    }
}

TEST_CASE("single state: the envelope is the solution")
{
    VerifyOptions opts;
    opts.n_steps = 1000;
    opts.trials = 5;
    const auto rep = verify_bounds(two_state, WeightVector::ones(1), opts);
    CHECK(rep.passed());
    // Only RK4 error remains: about 1e-12 at h = 1e-3 with rate 3.
    for (std::size_t k = 0; k < rep.grid.size(); ++k)
    {
        CHECK(std::abs(rep.max_upper_ratio[k] - 1.0) <= 1e-10);
        CHECK(std::abs(rep.min_lower_ratio[k] - 1.0) <= 1e-10);
    }
}

TEST_CASE("the harness reports violations")
{
    // A negative slack demands ratios below one, which t = 0 cannot meet.
    VerifyOptions opts;
    opts.n_steps = 100;
    opts.trials = 4;
    opts.slack = -0.5;
    const auto rep = verify_bounds(unit_bd(2), WeightVector::ones(2), opts);
    CHECK(!rep.passed());
    REQUIRE(rep.first_violation);
    CHECK(rep.first_violation->t == 0.0);
    CHECK(rep.first_violation->trial == 0);
}

TEST_CASE("results do not depend on the job count or kernel table")
{
    VerifyOptions opts;
    opts.horizon = 1.0;
    opts.n_steps = 500;
    opts.trials = 23;
    opts.seed = 5;
    const auto spec = sinusoid_bd(4);
    const auto one = verify_bounds(spec, WeightVector::ones(4), opts);
    opts.jobs = 4;
    const auto four = verify_bounds(spec, WeightVector::ones(4), opts);
    CHECK(one.max_upper_ratio == four.max_upper_ratio);
    CHECK(one.min_lower_ratio == four.min_lower_ratio);
    CHECK(one.margin == four.margin);
    CHECK(one.violations == four.violations);

    if (kernels::avx2() != nullptr)
    {
        opts.kernels = &kernels::scalar();
        const auto s = verify_bounds(spec, WeightVector::ones(4), opts);
        opts.kernels = kernels::avx2();
        const auto v = verify_bounds(spec, WeightVector::ones(4), opts);
        for (std::size_t k = 0; k < s.grid.size(); ++k)
        {
            CHECK(std::abs(s.max_upper_ratio[k] - v.max_upper_ratio[k]) <= 1e-12);
        }
    }
}

TEST_CASE("coupling")
{
    const auto spec = unit_bd(3);
    const auto rate = perron_weights(bstar_at(spec, 0.0));
    VerifyOptions opts;
    opts.horizon = 3.0;
    opts.n_steps = 3000;

    // delta_0 against delta_S.
    const std::vector<DistributionPair> corners{{Vector{1, 0, 0, 0}, Vector{0, 0, 0, 1}}};
    const auto rep = verify_convergence_coupling(spec, rate.weights, opts, corners);
    CHECK(rep.passed());
    CHECK(rep.trials == 1);
    for (double r : rep.max_upper_ratio)
    {
        CHECK(r <= 1.0 + 1e-6);
    }
    CHECK(rep.max_mass_defect <= 1e-10);
    CHECK(rep.min_probability >= -1e-12);

    // Identical distributions have nothing to converge.
    const std::vector<DistributionPair> same{{Vector{0.25, 0.25, 0.25, 0.25}, Vector{0.25, 0.25, 0.25, 0.25}}};
    const auto trivial = verify_convergence_coupling(spec, rate.weights, opts, same);
    CHECK(trivial.passed());
    const auto traj = solve(System::forward, spec, std::nullopt, same[0].first, 3.0, 300);
    const auto traj2 = solve(System::forward, spec, std::nullopt, same[0].second, 3.0, 300);
    CHECK(traj.states == traj2.states);

    const auto c4 = ChainSpec::batch_both(4, constant_rates({2, 1, 0.5, 0.25}), constant_rates({3, 1, 0.5, 0.1}));
    opts.trials = 200;
    opts.n_steps = 2000;
    const auto random_pairs = verify_convergence_coupling(c4, WeightVector::ones(4), opts);
    CHECK(random_pairs.passed());
    CHECK(random_pairs.trials == 200);
    CHECK(random_pairs.min_lower_ratio.empty());

    CHECK_THROWS_AS(verify_convergence_coupling(spec, rate.weights, opts,
                                                std::vector<DistributionPair>{{Vector{1, 0}, Vector{0, 1}}}),
                    Error);
}

TEST_CASE("verification csv is reproducible")
{
    VerifyOptions opts;
    opts.n_steps = 20;
    opts.trials = 3;
    const auto spec = sinusoid_bd(2);
    auto render = [&] {
        std::ostringstream os;
        write_verification_csv(verify_bounds(spec, WeightVector::ones(2), opts),
                               verify_convergence_coupling(spec, WeightVector::ones(2), opts), os);
        return os.str();
    };
    const std::string a = render();
    CHECK(a == render());
    CHECK(a.rfind("t,bounds_max_upper_ratio,bounds_min_lower_ratio,bounds_margin,coupling_max_upper_ratio,"
                  "coupling_margin\n0,1,1,0,1,0\n",
                  0) == 0);
    CHECK(std::count(a.begin(), a.end(), '\n') == 22);
}
