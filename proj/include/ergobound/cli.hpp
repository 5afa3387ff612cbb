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


#ifndef ERGOBOUND_CLI_HPP
#define ERGOBOUND_CLI_HPP

#include <ostream>

#include "ergobound/error.hpp"

namespace ergobound::cli
{

// Exit statuses. Every library error maps to exactly one of these.
enum ExitCode : int
{
    kOk = 0,
    kFailed = 1,         // check failed, bound violations, B* not essentially non-negative
    kUsage = 2,          // bad arguments or unparseable model
    kNumerical = 3,      // rate evaluation error, blow-up, non-convergence
    kInhomogeneous = 4,  // sharp rate requested for time-varying rates
    kReducible = 5,
};

int exit_code(ErrorCode code);

/// Entry point of the `ergobound` tool: subcommands check, rate, bounds,
/// verify. Reports go to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ergobound::cli

#endif  // ERGOBOUND_CLI_HPP
