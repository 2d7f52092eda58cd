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

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>

namespace movkl::detail {

// Portable draws: the standard distributions are implementation-defined.
class Draws {
public:
    explicit Draws(std::uint64_t seed) : eng_(seed) {}

    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }
    /// Integer in [lo, hi].
    std::size_t index(std::size_t lo, std::size_t hi)
    {
        return lo + static_cast<std::size_t>(uniform() * static_cast<double>(hi - lo + 1));
    }

    double normal()
    {
        if (spare_) {
            spare_ = false;
            return cached_;
        }
        double u1 = uniform();
        while (u1 <= 0.0)
            u1 = uniform();
        const double u2 = uniform();
        const double rad = std::sqrt(-2.0 * std::log(u1));
        cached_ = rad * std::sin(2.0 * std::numbers::pi * u2);
        spare_ = true;
        return rad * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::mt19937_64 eng_;
    bool spare_ = false;
    double cached_ = 0.0;
};

} // namespace movkl::detail
