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

// Scalar kernels on curves, output operators, operator-valued kernel terms
// K_k(x, z) = d_k G_k(x, z) T_k and the block Gram matrix they induce.

#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "movkl/funcspace.hpp"

namespace movkl {

enum class ScalarKind { Gaussian, Polynomial };

/// Gaussian exp(-|x - z|^2 / (2 s^2)) or polynomial (<x, z> + c)^p on curves,
/// with distances and inner products taken in the input grid's L2 norm.
class ScalarKernel {
public:
    static ScalarKernel gaussian(double bandwidth, bool normalize = false);
    static ScalarKernel polynomial(int degree, double offset = 1.0, bool normalize = false);

    ScalarKind kind() const noexcept { return kind_; }
    double bandwidth() const noexcept { return bandwidth_; }
    int degree() const noexcept { return degree_; }
    double offset() const noexcept { return offset_; }
    /// Curves are scaled to unit L2 norm before evaluation.
    bool normalize() const noexcept { return normalize_; }
    /// Positive factor multiplying every kernel value.
    double scale() const noexcept { return scale_; }
    ScalarKernel with_scale(double factor) const;

    double eval(const Curve& x, const Curve& z) const;
    /// Gram matrix [G(a_i, a_j)], symmetric by construction.
    Eigen::MatrixXd gram(const CurveVec& a) const;
    /// Cross matrix [G(a_i, b_j)].
    Eigen::MatrixXd cross(const CurveVec& a, const CurveVec& b) const;

    std::string describe() const;
    bool operator==(const ScalarKernel&) const = default;

private:
    ScalarKernel() = default;
    double eval_raw(const Eigen::VectorXd& w, const Eigen::Ref<const Eigen::VectorXd>& x,
                    const Eigen::Ref<const Eigen::VectorXd>& z) const;
    Eigen::MatrixXd prepared(const CurveVec& a) const;

    ScalarKind kind_ = ScalarKind::Gaussian;
    double bandwidth_ = 1.0;
    int degree_ = 1;
    double offset_ = 1.0;
    bool normalize_ = false;
    double scale_ = 1.0;
};

/// Eigenpairs of an output operator, descending; columns of `vectors` are
/// orthonormal in the quadrature inner product.
struct Spectrum {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
};

enum class OperatorKind { Identity, Multiplication, Integral };

const char* to_string(OperatorKind kind) noexcept;

/// A self-adjoint positive semidefinite map on curves of one output grid.
///
/// Identity:        (T a)(t) = a(t)
/// Multiplication:  (T a)(t) = exp(-t^2) a(t)
/// Integral:        (T a)(t) = sum_l w_l exp(-|t - s_l|) a(s_l), optionally
///                  replaced by its rank-q spectral truncation when q < m.
///
/// The integral operator's spectrum is computed once at construction; copies
/// share it.
class OutputOperator {
public:
    static OutputOperator identity(GridPtr grid);
    static OutputOperator multiplication(GridPtr grid);
    /// rank = 0 selects min(m, 20).
    static OutputOperator integral(GridPtr grid, std::size_t rank = 0);

    static constexpr std::size_t kDefaultRank = 20;

    OperatorKind kind() const noexcept { return kind_; }
    const GridPtr& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return grid_->size(); }
    /// Retained eigenpairs (m for Identity and Multiplication).
    std::size_t rank() const noexcept { return rank_; }

    Curve apply(const Curve& a) const;
    Eigen::VectorXd apply(const Eigen::Ref<const Eigen::VectorXd>& a) const;
    /// Applies T to every row of a row-stacked curve matrix.
    Eigen::MatrixXd apply_rows(const Eigen::MatrixXd& rows) const;

    const Spectrum& spectrum() const;
    double max_eigenvalue() const;

    /// Solves (scale T + shift I) u = b.
    Curve shifted_solve(double shift, double scale, const Curve& b) const;
    Eigen::VectorXd shifted_solve(double shift, double scale, const Eigen::Ref<const Eigen::VectorXd>& b) const;

    /// m x m matrix M with T a = M a.
    Eigen::MatrixXd dense() const;

    std::string describe() const;
    bool operator==(const OutputOperator& other) const noexcept;

private:
    struct IntegralData;

    OutputOperator(OperatorKind kind, GridPtr grid, std::size_t rank);

    OperatorKind kind_;
    GridPtr grid_;
    std::size_t rank_;
    Eigen::VectorXd diag_;  // multiplication weights h(t_j)
    std::shared_ptr<const IntegralData> integral_;
    std::shared_ptr<const Spectrum> spectrum_;
};

Curve op_apply(const OutputOperator& op, const Curve& a);
const Spectrum& op_spectrum(const OutputOperator& op);
Curve op_shifted_solve(const OutputOperator& op, double shift, double scale, const Curve& b);

/// d_k G_k(., .) T_k.
struct OvKernelTerm {
    ScalarKernel scalar;
    OutputOperator op;
    double weight = 1.0;
};

inline constexpr double kInfiniteNorm = std::numeric_limits<double>::infinity();

/// Weighted collection of kernel terms with the l_r feasibility constraint.
class KernelStack {
public:
    KernelStack(std::vector<OvKernelTerm> terms, double norm_exponent);

    const std::vector<OvKernelTerm>& terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }
    double norm_exponent() const noexcept { return r_; }
    const GridPtr& output_grid() const noexcept { return terms_.front().op.grid(); }

    Eigen::VectorXd weights() const;
    KernelStack with_weights(const Eigen::VectorXd& d) const;
    KernelStack with_norm_exponent(double r) const;
    /// Replaces every integral operator by one of the given truncation rank.
    KernelStack with_integral_rank(std::size_t rank) const;
    bool has_integral() const noexcept;

private:
    std::vector<OvKernelTerm> terms_;
    double r_;
};

/// Checks d_k >= 0 and sum d_k^r <= 1 + 1e-9 (max d_k for r = inf).
bool weights_feasible(const Eigen::VectorXd& d, double r, double slack = 1e-9);

/// Terms sharing the same operator, with their scalar Grams combined.
struct OperatorGroup {
    OutputOperator op;
    Eigen::MatrixXd gram;  // sum_{k in group} d_k G_k
    std::vector<std::size_t> members;
};

/// Block operator kernel matrix sum_k d_k G_k (x) T_k kept in factored form.
class BlockGram {
public:
    BlockGram(std::vector<Eigen::MatrixXd> scalar_grams, std::vector<OutputOperator> ops, Eigen::VectorXd weights);

    std::size_t n() const noexcept { return n_; }
    std::size_t m() const noexcept { return ops_.front().size(); }
    std::size_t terms() const noexcept { return ops_.size(); }
    const GridPtr& output_grid() const noexcept { return ops_.front().grid(); }

    const Eigen::MatrixXd& scalar_gram(std::size_t k) const { return (*grams_).at(k); }
    const OutputOperator& op(std::size_t k) const { return ops_.at(k); }
    const std::vector<OutputOperator>& ops() const noexcept { return ops_; }
    const Eigen::VectorXd& weights() const noexcept { return weights_; }

    BlockGram with_weights(const Eigen::VectorXd& d) const;
    /// Restriction to the listed samples (rows and columns of every G_k).
    BlockGram subset(std::span<const std::size_t> indices) const;

    /// Active terms (d_k > 0) merged by operator, in first-appearance order.
    std::vector<OperatorGroup> groups() const;

    /// Row-stacked action (K alpha)_i = sum_k d_k sum_j G_k(i, j) T_k alpha_j.
    Eigen::MatrixXd apply(const Eigen::MatrixXd& alpha) const;

    /// Dense (n m) x (n m) matrix, sample-major. Test/oracle path only.
    Eigen::MatrixXd densify(std::size_t max_dim = 5000) const;

private:
    std::shared_ptr<const std::vector<Eigen::MatrixXd>> grams_;
    std::vector<OutputOperator> ops_;
    Eigen::VectorXd weights_;
    std::size_t n_ = 0;
};

BlockGram assemble_gram(const KernelStack& stack, const CurveVec& inputs);
CurveVec gram_apply(const BlockGram& g, const CurveVec& alpha);

/// Median of pairwise L2 distances between the curves (0 if n < 2).
double median_pairwise_distance(const CurveVec& curves);

/// Rescales `k` so its Gram matrix on `curves` has unit mean diagonal.
ScalarKernel unit_diagonal(const ScalarKernel& k, const CurveVec& curves);

/// Gaussian kernels at the given multiples of `scale` plus polynomial kernels
/// of degree 1..3, each crossed with identity, multiplication and integral
/// operators. Weights start uniform at 1/M. When `calibration` is given every
/// scalar kernel is passed through unit_diagonal on those curves.
KernelStack standard_menu(double scale, const GridPtr& output_grid, std::size_t integral_rank,
                          std::span<const double> bandwidth_factors, double norm_exponent,
                          const CurveVec* calibration = nullptr);

} // namespace movkl
