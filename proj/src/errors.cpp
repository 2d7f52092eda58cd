/*
 * Copyright 2026 The movkl Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "movkl/errors.hpp"

#include <atomic>
#include <iostream>

namespace movkl {

namespace {
std::atomic<bool> g_warnings{true};
}

const char* to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::Dimension: return "dimension error";
    case ErrorKind::Domain: return "domain error";
    case ErrorKind::Numerical: return "numerical error";
    case ErrorKind::Capacity: return "capacity error";
    case ErrorKind::Precondition: return "precondition error";
    case ErrorKind::Data: return "data error";
    case ErrorKind::Config: return "config error";
    case ErrorKind::Degenerate: return "degenerate model";
    case ErrorKind::Convergence: return "convergence error";
    case ErrorKind::Io: return "i/o error";
    }
    return "error";
}

void set_warnings_enabled(bool enabled) noexcept { g_warnings = enabled; }

void log_warning(const std::string& msg)
{
    if (g_warnings)
        std::cerr << "movkl: warning: " << msg << '\n';
}

} // namespace movkl
