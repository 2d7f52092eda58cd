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

// Solvers for the ridge system (K + ridge I) alpha = y on a block Gram:
// a dense reference, the Kronecker eigendecomposition route for a single
// shared operator, and block Gauss-Seidel with variable splitting for
// mixtures of operators.

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "movkl/funcspace.hpp"
#include "movkl/kernels.hpp"

namespace movkl {

struct SolveConfig {
    double outer_tol = 1e-8;
    int outer_max_iter = 500;
    double inner_tol = 1e-10;
    int inner_max_iter = 200;
    /// Record the global relative residual after every Gauss-Seidel sweep.
    bool track_residuals = false;

    void validate() const;
};

enum class SolverKind { Dense, Kronecker, GaussSeidel };

const char* to_string(SolverKind kind) noexcept;

struct SolveReport {
    int iterations = 0;
    double final_residual = 0.0;  // ||(K + ridge I) alpha - y|| / ||y||  (absolute when y = 0)
    bool converged = false;
    SolverKind solver_kind = SolverKind::Dense;
    int inner_iterations = 0;  // total over all diagonal split solves
    int inner_fallbacks = 0;   // diagonal solves that fell back to a dense factorization
    std::vector<double> residual_history;
};

/// Relative residual ||(K + ridge I) alpha - y|| / ||y|| in the quadrature norm.
double relative_residual(const BlockGram& g, double ridge, const Eigen::MatrixXd& alpha, const Eigen::MatrixXd& y);

/// Direct LU on the densified system. Guarded to n*m <= 5000.
std::pair<CurveVec, SolveReport> dense_solve(const BlockGram& g, double ridge, const CurveVec& y);

/// Case of one operator shared by all terms: G = U L U^T, T = V S V^T W,
/// alpha = y / ridge + U [ (U^T Y W V) * (1/(L_a S_b + ridge) - 1/ridge) ] V^T.
std::pair<CurveVec, SolveReport> kron_solve(const Eigen::MatrixXd& gram, const OutputOperator& op, double ridge,
                                            const CurveVec& y);

/// Same, taking the combined Gram from a block Gram whose active terms share
/// a single operator. Throws a precondition error otherwise.
std::pair<CurveVec, SolveReport> kron_solve(const BlockGram& g, double ridge, const CurveVec& y);

/// True when every active term of `g` uses the same operator.
bool single_operator(const BlockGram& g);

std::pair<CurveVec, SolveReport> gauss_seidel_solve(const BlockGram& g, double ridge, const CurveVec& y,
                                                    const SolveConfig& cfg,
                                                    const std::optional<CurveVec>& warm = std::nullopt);

/// One term c_k T_k of a diagonal block K(x_i, x_i) = sum_k c_k T_k.
struct DiagTerm {
    double coeff;  // d_k G_k(x_i, x_i)
    OutputOperator op;
};

struct SplitResult {
    Eigen::VectorXd value;
    int iterations = 0;
    bool fell_back = false;
    double residual = 0.0;
};

/// Solves (sum_k c_k T_k + ridge I) u = s by splitting u into one copy per
/// non-identity term, tied by consensus constraints (over-relaxed ADMM).
/// Identity terms and each operator's smallest eigenvalue are moved into a
/// shared shift first. Every sub-step is a single shifted operator solve.
/// Falls back to a dense factorization of the block (m <= 2000) when
/// inner_max_iter is exhausted.
SplitResult split_block_solve(const std::vector<DiagTerm>& terms, double ridge, const Eigen::VectorXd& s,
                              const SolveConfig& cfg, const Eigen::VectorXd* warm = nullptr);

Curve split_block_solve(const std::vector<DiagTerm>& terms, double ridge, const Curve& s, const SolveConfig& cfg);

} // namespace movkl
