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

// Discretized L2 function spaces: sampling grids with quadrature weights,
// curves sampled on a grid, and stacks of curves sharing one grid.

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace movkl {

class Grid;
using GridPtr = std::shared_ptr<const Grid>;

/// Ordered sample locations with positive quadrature weights.
class Grid {
public:
    /// Validates strict monotonicity, positivity of weights and matching sizes (>= 2).
    Grid(std::vector<double> points, std::vector<double> weights);

    /// Trapezoid weights on arbitrary strictly increasing points.
    static GridPtr trapezoid(std::vector<double> points);
    /// `m` equispaced points on [a, b] with trapezoid weights.
    static GridPtr uniform(double a, double b, std::size_t m);
    /// `channels` copies of `base`, each shifted by `offset` so that the points
    /// stay increasing; every block keeps the base weights.
    static GridPtr stacked(const Grid& base, std::size_t channels, double offset);

    std::size_t size() const noexcept { return points_.size(); }
    std::span<const double> points() const noexcept { return {points_.data(), points_.size()}; }
    std::span<const double> weights() const noexcept { return {weights_.data(), weights_.size()}; }
    const Eigen::VectorXd& weight_vector() const noexcept { return w_; }

    bool operator==(const Grid& other) const noexcept;

private:
    std::vector<double> points_;
    std::vector<double> weights_;
    Eigen::VectorXd w_;
};

/// True when both grids are the same object or compare equal.
bool same_grid(const GridPtr& a, const GridPtr& b) noexcept;

/// A function sampled on a grid. Immutable.
class Curve {
public:
    Curve(GridPtr grid, Eigen::VectorXd values);

    static Curve zeros(GridPtr grid);
    static Curve constant(GridPtr grid, double value);

    const GridPtr& grid() const noexcept { return grid_; }
    const Eigen::VectorXd& values() const noexcept { return values_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(values_.size()); }
    double operator[](std::size_t j) const { return values_[static_cast<Eigen::Index>(j)]; }

private:
    GridPtr grid_;
    Eigen::VectorXd values_;
};

/// n curves on one grid, stored row-wise (row i = curve i).
class CurveVec {
public:
    CurveVec(GridPtr grid, Eigen::MatrixXd rows);
    explicit CurveVec(std::span<const Curve> curves);

    static CurveVec zeros(GridPtr grid, std::size_t n);

    const GridPtr& grid() const noexcept { return grid_; }
    const Eigen::MatrixXd& rows() const noexcept { return rows_; }
    std::size_t count() const noexcept { return static_cast<std::size_t>(rows_.rows()); }
    std::size_t samples() const noexcept { return static_cast<std::size_t>(rows_.cols()); }

    Curve curve(std::size_t i) const;
    /// Curves at the given indices, in order.
    CurveVec select(std::span<const std::size_t> indices) const;

private:
    GridPtr grid_;
    Eigen::MatrixXd rows_;
};

double l2_inner(const Curve& a, const Curve& b);
double l2_norm_sq(const Curve& a);
double vec_inner(const CurveVec& a, const CurveVec& b);
double vec_norm_sq(const CurveVec& a);

namespace detail {
// Unchecked kernels of the above, on raw samples.
inline double weighted_dot(const Eigen::VectorXd& w, const Eigen::Ref<const Eigen::VectorXd>& a,
                           const Eigen::Ref<const Eigen::VectorXd>& b)
{
    return (w.array() * (a.array() * b.array())).sum();
}

// Σ_i Σ_j w_j a_ij b_ij for row-stacked curves.
inline double weighted_frobenius(const Eigen::VectorXd& w, const Eigen::MatrixXd& a, const Eigen::MatrixXd& b)
{
    return ((a.array() * b.array()).rowwise() * w.transpose().array()).sum();
}
} // namespace detail

} // namespace movkl
