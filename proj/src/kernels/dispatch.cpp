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

#include "ergobound/kernels.hpp"

#include <string>

#include "ergobound/error.hpp"
#include "kernel_impl.hpp"

namespace ergobound::kernels
{

namespace
{

constexpr Table kScalar{
    "scalar",
    detail::scalar_matmul_block,
    detail::scalar_matvec,
    detail::scalar_axpy_to,
    detail::scalar_rk4_combine,
    detail::scalar_column_sums,
    detail::scalar_column_abs_sums,
};

#if defined(ERGOBOUND_HAVE_AVX2)
constexpr Table kAvx2{
    "avx2",
    detail::avx2_matmul_block,
    detail::avx2_matvec,
    detail::avx2_axpy_to,
    detail::avx2_rk4_combine,
    detail::avx2_column_sums,
    detail::avx2_column_abs_sums,
};

bool cpu_has_avx2_fma()
{
#if defined(__GNUC__) || defined(__clang__)
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}
#endif

}  // namespace

const Table& scalar() { return kScalar; }

const Table* avx2()
{
#if defined(ERGOBOUND_HAVE_AVX2)
    static const bool supported = cpu_has_avx2_fma();
    return supported ? &kAvx2 : nullptr;
#else
    return nullptr;
#endif
}

const Table& best()
{
    static const Table& chosen = avx2() != nullptr ? *avx2() : kScalar;
    return chosen;
}

const Table& by_name(std::string_view name)
{
    if (name == "auto")
    {
        return best();
    }
    if (name == "scalar")
    {
        return kScalar;
    }
    if (name == "avx2")
    {
        if (const Table* t = avx2())
        {
            return *t;
        }
        throw Error(ErrorCode::invalid_argument, "avx2 kernels not available on this CPU/build");
    }
    throw Error(ErrorCode::invalid_argument, "unknown kernel set '" + std::string(name) + "'");
}

std::vector<std::string_view> available()
{
    std::vector<std::string_view> names{"scalar"};
    if (avx2() != nullptr)
    {
        names.emplace_back("avx2");
    }
    return names;
}

}  // namespace ergobound::kernels
