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

#ifndef ERGOBOUND_CSV_HPP
#define ERGOBOUND_CSV_HPP

#include <initializer_list>
#include <ostream>
#include <span>
#include <string>
#include <string_view>

namespace ergobound::csv
{

// Comma separated, '.' decimal point, LF line ends, 17 significant digits
// (round-trips every double). Locale independent.

std::string format(double v);

void write_header(std::ostream& os, std::initializer_list<std::string_view> columns);
void write_row(std::ostream& os, std::span<const double> values);
void write_row(std::ostream& os, std::initializer_list<double> values);

}  // namespace ergobound::csv

#endif  // ERGOBOUND_CSV_HPP
