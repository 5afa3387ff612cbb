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

#ifndef ERGOBOUND_ERROR_HPP
#define ERGOBOUND_ERROR_HPP

#include <stdexcept>
#include <string>

namespace ergobound
{

enum class ErrorCode
{
    invalid_argument,
    parse,
    evaluation,          // negative or non-finite rate at some time
    not_nonnegative,     // B*(t) has negative off-diagonal entries
    inhomogeneous,
    reducible,
    conditions_not_met,  // class hypotheses for equalizing weights fail
    not_converged,
    blow_up,
};

/// Library-wide exception. The code drives CLI exit statuses.
class Error : public std::runtime_error
{
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace ergobound

#endif  // ERGOBOUND_ERROR_HPP
