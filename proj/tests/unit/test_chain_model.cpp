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

#include "ergobound/chain_model.hpp"
#include "ergobound/error.hpp"
#include "support/random_chains.hpp"

using namespace ergobound;

namespace
{

ErrorCode code_of(auto&& fn)
{
    try
    {
        fn();
    }
    catch (const Error& e)
    {
        return e.code();
    }
    FAIL("expected ergobound::Error");
    return ErrorCode::invalid_argument;
}

}  // namespace

TEST_CASE("rate functions")
{
    CHECK(RateFunction::constant(2.5)(17.0) == 2.5);
    CHECK(RateFunction()(0.0) == 0.0);
    CHECK(code_of([] { RateFunction::constant(-1.0); }) == ErrorCode::invalid_argument);

    const auto s = RateFunction::sinusoid(1.0, 1.0, 1.0);
    CHECK(s(0.0) == 1.0);
    CHECK(s(0.25) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(s(0.75) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(!s.is_constant());
    CHECK(RateFunction::sinusoid(3.0, 0.0, 2.0).is_constant());
    CHECK(RateFunction::sinusoid(3.0, 1.0, 0.0, 0.5).is_constant());

    // Negative excursions fail when evaluated, not when constructed.
    const auto dip = RateFunction::sinusoid(0.5, 1.0, 1.0);
    CHECK(dip(0.0) == 0.5);
    CHECK(code_of([&] { dip(0.75); }) == ErrorCode::evaluation);

    const auto tab = RateFunction::table({0.0, 1.0, 3.0}, {2.0, 4.0, 0.0});
    CHECK(tab(-5.0) == 2.0);
    CHECK(tab(0.0) == 2.0);
    CHECK(tab(1.0) == 4.0);
    CHECK(tab(3.0) == 0.0);
    CHECK(tab(10.0) == 0.0);
    CHECK(tab(0.5) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(tab(2.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(!tab.is_constant());
    CHECK(RateFunction::table({0.0, 1.0}, {2.0, 2.0}).is_constant());

    CHECK(code_of([] { RateFunction::table({0.0}, {1.0}); }) == ErrorCode::invalid_argument);
    CHECK(code_of([] { RateFunction::table({0.0, 0.0}, {1.0, 1.0}); }) == ErrorCode::invalid_argument);
    CHECK(code_of([] { RateFunction::table({0.0, 1.0}, {1.0, -1.0}); }) == ErrorCode::invalid_argument);
    CHECK(code_of([] { RateFunction::table({0.0, 1.0}, {1.0}); }) == ErrorCode::invalid_argument);
}

TEST_CASE("generator examples")
{
    const auto bd = ChainSpec::birth_death(1, constant_rates({1.0}), constant_rates({2.0}));
    CHECK(eval_generator(bd, 0.0) == SquareMatrix{{-1, 1}, {2, -2}});
    CHECK(eval_transposed(bd, 0.0) == SquareMatrix{{-1, 2}, {1, -2}});

    const auto bb = ChainSpec::batch_birth(2, constant_rates({3.0, 1.0}), constant_rates({2.0, 2.0}));
    CHECK(eval_generator(bb, 0.0) == SquareMatrix{{-4, 3, 1}, {2, -5, 3}, {0, 2, -2}});

    const auto bdth = ChainSpec::batch_death(2, constant_rates({2.0, 1.0}), constant_rates({1.0, 1.0}));
    CHECK(eval_transposed(bdth, 0.0) == SquareMatrix{{-1, 2, 1}, {1, -3, 2}, {0, 1, -3}});

    // Class IV, S=2: q(0,1)=a1, q(0,2)=a2, q(1,2)=a1, q(1,0)=b1, q(2,0)=b2, q(2,1)=b1.
    const auto both = ChainSpec::batch_both(2, constant_rates({3.0, 1.0}), constant_rates({2.0, 0.5}));
    CHECK(eval_generator(both, 0.0) == SquareMatrix{{-4, 3, 1}, {2, -5, 3}, {0.5, 2, -2.5}});
}

TEST_CASE("construction validates structure, not regularity")
{
    CHECK(code_of([] { ChainSpec::birth_death(0, {}, {}); }) == ErrorCode::invalid_argument);
    CHECK(code_of([] { ChainSpec::birth_death(2, constant_rates({1.0}), constant_rates({1.0, 1.0})); }) ==
          ErrorCode::invalid_argument);
    CHECK(code_of([] { ChainSpec::general(1, {{0, 0, RateFunction::constant(1.0)}}); }) ==
          ErrorCode::invalid_argument);
    CHECK(code_of([] { ChainSpec::general(1, {{0, 2, RateFunction::constant(1.0)}}); }) ==
          ErrorCode::invalid_argument);
    CHECK(code_of([] {
              ChainSpec::general(1, {{0, 1, RateFunction::constant(1.0)}, {0, 1, RateFunction::constant(2.0)}});
          }) == ErrorCode::invalid_argument);

    const auto bad = ChainSpec::batch_birth(3, constant_rates({1.0, 2.0, 0.5}), constant_rates({1.0, 1.0, 1.0}));
    CHECK(bad.kind() == ChainKind::batch_birth);
    const auto rep = check_regularity(bad, std::vector<double>{0.0});
    CHECK(!rep.regular);
    REQUIRE(!rep.violations.empty());
    CHECK(rep.violations.front().k == 1);
    CHECK(rep.violations.front().upward);
    CHECK(rep.violations.front().value_k == 1.0);
    CHECK(rep.violations.front().value_next == 2.0);
}

TEST_CASE("regularity examples")
{
    const std::vector<double> grid{0.0, 0.3, 1.0};
    const auto bd = ChainSpec::birth_death(4, {RateFunction::sinusoid(1, 1, 1), RateFunction::constant(2),
                                               RateFunction::constant(0), RateFunction::constant(1)},
                                           constant_rates({1, 2, 3, 4}));
    CHECK(check_regularity(bd, grid).regular);
    CHECK(check_regularity(bd, grid).grid_points == 3);

    std::vector<double> a, b;
    for (int k = 1; k <= 5; ++k)
    {
        a.push_back(std::pow(2.0, -k));
        b.push_back(std::pow(3.0, -k));
    }
    CHECK(check_regularity(ChainSpec::batch_both(5, constant_rates(a), constant_rates(b)), grid).regular);

    // Equal consecutive rates are allowed (non-increasing, not decreasing).
    CHECK(check_regularity(ChainSpec::batch_birth(3, constant_rates({1, 1, 1}), constant_rates({1, 1, 1})), grid)
              .regular);

    // A monotonicity break that only appears at some times.
    const auto late = ChainSpec::batch_death(
        2, {RateFunction::table({0, 1}, {2, 0.5}), RateFunction::constant(1)}, constant_rates({1, 1}));
    const auto rep = check_regularity(late, grid);
    CHECK(!rep.regular);
    CHECK(rep.violations.size() == 1);
    CHECK(rep.violations.front().t == 1.0);
    CHECK(!rep.violations.front().upward);
}

TEST_CASE("generator invariants on random chains")
{
    Rng rng(3);
    for (int trial = 0; trial < 40; ++trial)
    {
        const auto kind = static_cast<ChainKind>(trial % 5);
        const std::size_t S = testing::random_size(rng, 1, 8);
        const auto spec = testing::random_class_chain(kind, S, rng);
        const auto q = eval_generator(spec, 0.0);
        const auto a = eval_transposed(spec, 0.0);
        CHECK(a == q.transposed());
        for (std::size_t i = 0; i <= S; ++i)
        {
            double row = 0.0;
            for (std::size_t j = 0; j <= S; ++j)
            {
                row += q(i, j);
                if (i != j)
                {
                    CHECK(q(i, j) >= 0.0);
                }
            }
            CHECK(std::abs(row) <= 1e-13 * q.max_abs());
        }
        if (kind != ChainKind::general)
        {
            CHECK(check_regularity(spec, std::vector<double>{0.0}).regular);
        }
        CHECK(spec.homogeneous());
    }
}

TEST_CASE("time-varying rates reach the generator")
{
    const auto spec = ChainSpec::birth_death(1, {RateFunction::sinusoid(1, 1, 1)}, constant_rates({1}));
    CHECK(!spec.homogeneous());
    CHECK(eval_generator(spec, 0.25)(0, 1) == doctest::Approx(2.0));
    CHECK(eval_generator(spec, 0.75)(0, 1) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("kind names and grid")
{
    for (auto k : {ChainKind::general, ChainKind::birth_death, ChainKind::batch_birth, ChainKind::batch_death,
                   ChainKind::batch_both})
    {
        CHECK(chain_kind_from_string(to_string(k)) == k);
    }
    CHECK(!chain_kind_from_string("nope"));
    const auto g = uniform_grid(2.0, 5);
    CHECK(g == std::vector<double>{0.0, 0.5, 1.0, 1.5, 2.0});
}
