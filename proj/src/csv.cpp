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

#include "ergobound/csv.hpp"

#include <array>
#include <charconv>

namespace ergobound::csv
{

std::string format(double v)
{
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
    return std::string(buf.data(), res.ptr);
}

void write_header(std::ostream& os, std::initializer_list<std::string_view> columns)
{
    bool first = true;
    for (auto c : columns)
    {
        if (!first)
        {
            os << ',';
        }
        os << c;
        first = false;
    }
    os << '\n';
}

void write_row(std::ostream& os, std::span<const double> values)
{
    for (std::size_t i = 0; i < values.size(); ++i)
    {
        if (i > 0)
        {
            os << ',';
        }
        os << format(values[i]);
    }
    os << '\n';
}

void write_row(std::ostream& os, std::initializer_list<double> values)
{
    write_row(os, std::span<const double>(values.begin(), values.size()));
}

}  // namespace ergobound::csv
