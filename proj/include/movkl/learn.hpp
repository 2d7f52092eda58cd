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

// Functional-response kernel ridge regression and l_r-norm multiple
// operator-valued kernel learning by block-coordinate descent.
//
// Convention: the dual system is (K + lambda I) alpha = y with
// K = sum_k d_k K_k, which is the stationarity condition of
//
//   min_{d, f}  sum_k ||f_k||^2 / (2 d_k) + 1/(2 lambda) sum_i ||y_i - sum_k f_k(x_i)||^2
//
// with f_k = d_k sum_i K_k(x_i, .) alpha_i. The objective trace records this
// primal value after every alpha-step.

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "movkl/errors.hpp"
#include "movkl/funcspace.hpp"
#include "movkl/kernels.hpp"
#include "movkl/linsolve.hpp"

namespace movkl {

struct FitConfig {
    double lambda = 1.0;
    double r = 2.0;  // kInfiniteNorm keeps uniform weights
    double mkl_tol = 1e-4;
    int mkl_max_iter = 100;
    SolveConfig solve;

    void validate() const;
};

struct MovklModel {
    CurveVec alpha;
    Eigen::VectorXd weights;
    KernelStack stack;  // carries the fitted weights and r
    CurveVec train_inputs;
    double lambda = 1.0;
    double r = 2.0;
    std::vector<double> objective_trace;
    std::vector<int> solver_iterations;  // per alpha-step
    int mkl_iterations = 0;
    bool mkl_converged = false;
    std::string target = "targets";  // which dataset curves were regressed

    const GridPtr& input_grid() const noexcept { return train_inputs.grid(); }
    const GridPtr& output_grid() const noexcept { return alpha.grid(); }
};

/// Raised when an alpha-step fails inside movkl_fit; carries the objective
/// values recorded so far.
class FitError : public Error {
public:
    FitError(ErrorKind kind, const std::string& what, std::vector<double> trace)
        : Error(kind, what), trace_(std::move(trace))
    {
    }
    const std::vector<double>& trace() const noexcept { return trace_; }

private:
    std::vector<double> trace_;
};

/// d_k = s_k^{1/(r+1)} / (sum_j s_j^{r/(r+1)})^{1/r}  with s_k = ||f_k||^2.
Eigen::VectorXd weight_update(const Eigen::VectorXd& fnorms_sq, double r);

/// ||f_k||^2 = d_k^2 <(G_k (x) T_k) alpha, alpha>.
double fk_norm_sq(const BlockGram& g, const CurveVec& alpha, std::size_t k);
Eigen::VectorXd fk_norms_sq(const BlockGram& g, const Eigen::MatrixXd& alpha);

/// Primal objective at (alpha, d = g.weights()).
double primal_objective(const BlockGram& g, const Eigen::MatrixXd& alpha, const Eigen::MatrixXd& y, double lambda);

/// Single operator-valued kernel ridge regression; the term's weight is set to 1.
MovklModel krr_fit(const OvKernelTerm& term, const CurveVec& inputs, const CurveVec& targets, const FitConfig& cfg);

MovklModel movkl_fit(const KernelStack& stack, const CurveVec& inputs, const CurveVec& targets, const FitConfig& cfg);

/// Result of the alternating loop on a prebuilt (unweighted) block Gram.
struct FitState {
    Eigen::MatrixXd alpha;
    Eigen::VectorXd weights;
    std::vector<double> objective_trace;
    std::vector<int> solver_iterations;
    int iterations = 0;
    bool converged = false;
};

/// Algorithm core shared by movkl_fit and cross-validation. The weights held
/// by `g` are ignored; the loop starts from d_k = 1/M.
FitState fit_on_gram(const BlockGram& g, const CurveVec& targets, const FitConfig& cfg);

Curve predict(const MovklModel& model, const Curve& x_new);
CurveVec predict(const MovklModel& model, const CurveVec& x_new);

/// Predictions from per-term cross Grams cross[k](i, j) = G_k(x_i, z_j).
Eigen::MatrixXd predict_from_cross(const std::vector<OutputOperator>& ops, const Eigen::VectorXd& weights,
                                   const std::vector<Eigen::MatrixXd>& cross, const Eigen::MatrixXd& alpha);

// Model archive: versioned JSON, values round-trip bit-exactly.
inline constexpr int kModelFormatVersion = 1;
std::string model_to_json(const MovklModel& model);
MovklModel model_from_json(const std::string& text);
void save_model(const std::filesystem::path& path, const MovklModel& model);
MovklModel load_model(const std::filesystem::path& path);

} // namespace movkl
