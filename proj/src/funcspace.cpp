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

#include "movkl/funcspace.hpp"

#include <cmath>
#include <string>

#include "movkl/errors.hpp"

namespace movkl {

Grid::Grid(std::vector<double> points, std::vector<double> weights)
    : points_(std::move(points)), weights_(std::move(weights))
{
    require(points_.size() >= 2, ErrorKind::Dimension, "grid needs at least two points");
    require(points_.size() == weights_.size(), ErrorKind::Dimension, "grid points/weights length mismatch");
    for (std::size_t j = 0; j < points_.size(); ++j) {
        require(std::isfinite(points_[j]), ErrorKind::Data, "non-finite grid point " + std::to_string(j));
        require(std::isfinite(weights_[j]) && weights_[j] > 0.0, ErrorKind::Domain,
                "grid weight " + std::to_string(j) + " must be positive");
        if (j > 0)
            require(points_[j] > points_[j - 1], ErrorKind::Domain,
                    "grid points must be strictly increasing (index " + std::to_string(j) + ")");
    }
    w_ = Eigen::Map<const Eigen::VectorXd>(weights_.data(), static_cast<Eigen::Index>(weights_.size()));
}

GridPtr Grid::trapezoid(std::vector<double> points)
{
    require(points.size() >= 2, ErrorKind::Dimension, "grid needs at least two points");
    const std::size_t m = points.size();
    std::vector<double> w(m, 0.0);
    for (std::size_t j = 0; j + 1 < m; ++j) {
        const double h = 0.5 * (points[j + 1] - points[j]);
        w[j] += h;
        w[j + 1] += h;
    }
    return std::make_shared<const Grid>(std::move(points), std::move(w));
}

GridPtr Grid::uniform(double a, double b, std::size_t m)
{
    require(m >= 2, ErrorKind::Dimension, "uniform grid needs m >= 2");
    require(b > a, ErrorKind::Domain, "uniform grid needs b > a");
    const double dt = (b - a) / static_cast<double>(m - 1);
    std::vector<double> p(m), w(m, dt);
    for (std::size_t j = 0; j < m; ++j)
        p[j] = a + dt * static_cast<double>(j);
    p[m - 1] = b;
    w.front() = w.back() = 0.5 * dt;
    return std::make_shared<const Grid>(std::move(p), std::move(w));
}

GridPtr Grid::stacked(const Grid& base, std::size_t channels, double offset)
{
    require(channels >= 1, ErrorKind::Domain, "stacked grid needs at least one channel");
    const auto bp = base.points();
    require(offset > bp.back() - bp.front(), ErrorKind::Domain, "channel offset must exceed the base grid span");
    std::vector<double> p, w;
    p.reserve(channels * base.size());
    w.reserve(channels * base.size());
    for (std::size_t c = 0; c < channels; ++c) {
        for (std::size_t j = 0; j < base.size(); ++j) {
            p.push_back(bp[j] + offset * static_cast<double>(c));
            w.push_back(base.weights()[j]);
        }
    }
    return std::make_shared<const Grid>(std::move(p), std::move(w));
}

bool Grid::operator==(const Grid& other) const noexcept
{
    return points_ == other.points_ && weights_ == other.weights_;
}

bool same_grid(const GridPtr& a, const GridPtr& b) noexcept
{
    if (a == b)
        return true;
    return a && b && *a == *b;
}

Curve::Curve(GridPtr grid, Eigen::VectorXd values) : grid_(std::move(grid)), values_(std::move(values))
{
    require(grid_ != nullptr, ErrorKind::Dimension, "curve without grid");
    require(static_cast<std::size_t>(values_.size()) == grid_->size(), ErrorKind::Dimension,
            "curve length " + std::to_string(values_.size()) + " does not match grid size " +
                std::to_string(grid_->size()));
    require(values_.allFinite(), ErrorKind::Data, "curve contains non-finite values");
}

Curve Curve::zeros(GridPtr grid)
{
    const auto m = static_cast<Eigen::Index>(grid->size());
    return Curve(std::move(grid), Eigen::VectorXd::Zero(m));
}

Curve Curve::constant(GridPtr grid, double value)
{
    const auto m = static_cast<Eigen::Index>(grid->size());
    return Curve(std::move(grid), Eigen::VectorXd::Constant(m, value));
}

CurveVec::CurveVec(GridPtr grid, Eigen::MatrixXd rows) : grid_(std::move(grid)), rows_(std::move(rows))
{
    require(grid_ != nullptr, ErrorKind::Dimension, "curve vector without grid");
    require(rows_.rows() == 0 || static_cast<std::size_t>(rows_.cols()) == grid_->size(), ErrorKind::Dimension,
            "curve vector width does not match grid size");
    if (rows_.rows() == 0)
        rows_.resize(0, static_cast<Eigen::Index>(grid_->size()));
    require(rows_.allFinite(), ErrorKind::Data, "curve vector contains non-finite values");
}

CurveVec::CurveVec(std::span<const Curve> curves)
{
    require(!curves.empty(), ErrorKind::Dimension, "cannot build a curve vector from zero curves");
    grid_ = curves.front().grid();
    rows_.resize(static_cast<Eigen::Index>(curves.size()), static_cast<Eigen::Index>(grid_->size()));
    for (std::size_t i = 0; i < curves.size(); ++i) {
        require(same_grid(curves[i].grid(), grid_), ErrorKind::Dimension,
                "curve " + std::to_string(i) + " is on a different grid");
        rows_.row(static_cast<Eigen::Index>(i)) = curves[i].values().transpose();
    }
}

CurveVec CurveVec::zeros(GridPtr grid, std::size_t n)
{
    const auto m = static_cast<Eigen::Index>(grid->size());
    return CurveVec(std::move(grid), Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), m));
}

Curve CurveVec::curve(std::size_t i) const
{
    require(i < count(), ErrorKind::Dimension, "curve index out of range");
    return Curve(grid_, rows_.row(static_cast<Eigen::Index>(i)).transpose());
}

CurveVec CurveVec::select(std::span<const std::size_t> indices) const
{
    Eigen::MatrixXd out(static_cast<Eigen::Index>(indices.size()), rows_.cols());
    for (std::size_t r = 0; r < indices.size(); ++r) {
        require(indices[r] < count(), ErrorKind::Dimension, "curve index out of range");
        out.row(static_cast<Eigen::Index>(r)) = rows_.row(static_cast<Eigen::Index>(indices[r]));
    }
    return CurveVec(grid_, std::move(out));
}

double l2_inner(const Curve& a, const Curve& b)
{
    require(same_grid(a.grid(), b.grid()), ErrorKind::Dimension, "l2_inner: curves live on different grids");
    return detail::weighted_dot(a.grid()->weight_vector(), a.values(), b.values());
}

double l2_norm_sq(const Curve& a) { return l2_inner(a, a); }

double vec_inner(const CurveVec& a, const CurveVec& b)
{
    require(a.count() == b.count(), ErrorKind::Dimension, "vec_inner: curve counts differ");
    require(same_grid(a.grid(), b.grid()), ErrorKind::Dimension, "vec_inner: curve vectors live on different grids");
    return detail::weighted_frobenius(a.grid()->weight_vector(), a.rows(), b.rows());
}

double vec_norm_sq(const CurveVec& a) { return vec_inner(a, a); }

} // namespace movkl
