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
#include <vector>

#include "ergobound/error.hpp"
#include "ergobound/kernels.hpp"
#include "ergobound/matrix.hpp"
#include "ergobound/random.hpp"

using namespace ergobound;

namespace
{

std::vector<double> random_vec(Rng& rng, std::size_t n)
{
    std::vector<double> v(n);
    for (double& x : v)
    {
        x = rng.uniform(-1.0, 1.0);
    }
    return v;
}

// Reference products written out with plain loops, independent of both
// kernel tables.
std::vector<double> naive_block(const std::vector<double>& m, std::size_t n, const std::vector<double>& x,
                                std::size_t k)
{
    std::vector<double> out(n * k, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t c = 0; c < k; ++c)
                out[i * k + c] += m[i * n + j] * x[j * k + c];
    return out;
}

double max_rel(const std::vector<double>& a, const std::vector<double>& b)
{
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        worst = std::max(worst, std::abs(a[i] - b[i]) / std::max(1.0, std::abs(b[i])));
    }
    return worst;
}

}  // namespace

TEST_CASE("square matrix basics")
{
    const SquareMatrix m{{1, 2}, {3, 4}};
    CHECK(m.dim() == 2);
    CHECK(m(1, 0) == 3);
    CHECK(m.transposed() == SquareMatrix{{1, 3}, {2, 4}});
    CHECK(trace(m) == 5);
    CHECK(determinant(m) == doctest::Approx(-2.0).epsilon(1e-15));
    CHECK(m * SquareMatrix::identity(2) == m);
    CHECK((m * m) == SquareMatrix{{7, 10}, {15, 22}});
    CHECK(max_abs_diff(m, m.transposed()) == 1.0);
    CHECK(m.max_abs() == 4.0);
    const std::vector<double> x{1.0, -1.0};
    CHECK(m * x == Vector{-1.0, -1.0});
    CHECK(l1_norm(x) == 2.0);
    CHECK(determinant(SquareMatrix{{1, 2}, {2, 4}}) == 0.0);
    CHECK(determinant(SquareMatrix{{0, 1, 0}, {0, 0, 1}, {1, 0, 0}}) == doctest::Approx(1.0));
}

TEST_CASE("ragged initializer rows are rejected")
{
    CHECK_THROWS_AS((SquareMatrix{{1, 2}, {3}}), Error);
}

TEST_CASE("kernel dispatch")
{
    CHECK(std::string_view(kernels::scalar().name) == "scalar");
    CHECK(&kernels::by_name("scalar") == &kernels::scalar());
    CHECK(&kernels::by_name("auto") == &kernels::best());
    CHECK_THROWS_AS(kernels::by_name("neon-ish"), Error);
    const auto names = kernels::available();
    REQUIRE(!names.empty());
    CHECK(names.front() == "scalar");
    if (kernels::avx2() != nullptr)
    {
        CHECK(&kernels::best() == kernels::avx2());
        CHECK(&kernels::by_name("avx2") == kernels::avx2());
    }
    else
    {
        CHECK_THROWS_AS(kernels::by_name("avx2"), Error);
    }
}

TEST_CASE("every kernel table matches a naive reference")
{
    Rng rng(42);
    std::vector<const kernels::Table*> tables{&kernels::scalar()};
    if (kernels::avx2() != nullptr)
    {
        tables.push_back(kernels::avx2());
    }
    for (const kernels::Table* t : tables)
    {
        CAPTURE(t->name);
        // Widths straddle the 16/4/1 lane blocking of the vector variant.
        for (std::size_t n : {1, 2, 3, 5, 8, 13})
        {
            for (std::size_t k : {1, 2, 3, 4, 5, 7, 16, 17, 21, 37})
            {
                const auto m = random_vec(rng, n * n);
                const auto x = random_vec(rng, n * k);
                std::vector<double> out(n * k);
                t->matmul_block(m.data(), n, x.data(), k, out.data());
                CHECK(max_rel(out, naive_block(m, n, x, k)) <= 1e-14);

                std::vector<double> sums(k), abs_sums(k), ref(k, 0.0), ref_abs(k, 0.0);
                t->column_sums(x.data(), n, k, sums.data());
                t->column_abs_sums(x.data(), n, k, abs_sums.data());
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t c = 0; c < k; ++c)
                    {
                        ref[c] += x[i * k + c];
                        ref_abs[c] += std::abs(x[i * k + c]);
                    }
                CHECK(max_rel(sums, ref) <= 1e-14);
                CHECK(max_rel(abs_sums, ref_abs) <= 1e-14);
            }
            const auto m = random_vec(rng, n * n);
            const auto x = random_vec(rng, n);
            std::vector<double> y(n);
            t->matvec(m.data(), n, x.data(), y.data());
            CHECK(max_rel(y, naive_block(m, n, x, 1)) <= 1e-14);
        }
        for (std::size_t len : {1, 3, 4, 9, 33})
        {
            const auto x = random_vec(rng, len);
            const auto y = random_vec(rng, len);
            std::vector<double> out(len);
            t->axpy_to(x.data(), 0.25, y.data(), len, out.data());
            for (std::size_t i = 0; i < len; ++i)
            {
                CHECK(out[i] == doctest::Approx(x[i] + 0.25 * y[i]).epsilon(1e-15));
            }
            const auto k1 = random_vec(rng, len), k2 = random_vec(rng, len), k3 = random_vec(rng, len),
                       k4 = random_vec(rng, len);
            std::vector<double> acc = x;
            t->rk4_combine(acc.data(), k1.data(), k2.data(), k3.data(), k4.data(), 0.1, len);
            for (std::size_t i = 0; i < len; ++i)
            {
                const double ref = x[i] + 0.1 / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
                CHECK(std::abs(acc[i] - ref) <= 1e-15);
            }
        }
    }
}

TEST_CASE("rng is reproducible and in range")
{
    Rng a(7), b(7);
    for (int i = 0; i < 1000; ++i)
    {
        const double u = a.uniform();
        CHECK(u == b.uniform());
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
    CHECK(Rng(1).next_u64() != Rng(2).next_u64());
}
