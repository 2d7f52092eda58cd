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

#pragma once

#include <stdexcept>
#include <string>

namespace movkl {

enum class ErrorKind {
    Dimension,     // mismatched grids, lengths or counts
    Domain,        // argument outside its admissible range
    Numerical,     // eigensolver / factorization breakdown
    Capacity,      // problem too large for a dense path
    Precondition,  // caller picked the wrong solver for the instance
    Data,          // malformed or non-finite input data
    Config,        // invalid run configuration
    Degenerate,    // fitted model collapsed (all kernel norms zero)
    Convergence,   // iterative solver gave up
    Io,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, ErrorKind kind, const std::string& what)
{
    if (!cond)
        throw Error(kind, what);
}

// Minimal diagnostic sink; warnings go to stderr unless silenced.
void set_warnings_enabled(bool enabled) noexcept;
void log_warning(const std::string& msg);

} // namespace movkl
