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

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "movkl/funcspace.hpp"
#include "movkl/kernels.hpp"
#include "movkl/learn.hpp"

namespace movkl {

/// Integrated squared error sum_i sum_j w_j (y_ij - yhat_ij)^2.
double rsse(const CurveVec& truth, const CurveVec& pred);

/// Percentage of samples where [pred >= threshold] equals the 0/1 truth label.
double lcr(const CurveVec& truth_labels, const CurveVec& pred, double threshold = 0.5);

struct CvSpec {
    std::vector<double> lambda_grid;
    /// Integral-operator truncation ranks; ignored when the stack has no
    /// integral operator.
    std::vector<std::size_t> rank_grid;
};

struct CvRow {
    double lambda = 0.0;
    std::size_t rank = 0;  // 0 when no integral operator is present
    double cv_rsse = 0.0;
    bool valid = true;
};

struct CvResult {
    double best_lambda = 0.0;
    std::size_t best_rank = 0;
    double best_rsse = 0.0;
    std::vector<CvRow> table;  // lambda-major, in grid order
};

/// One-curve-leave-out cross-validation over (lambda, rank). Each candidate
/// is refit on n - 1 curves per fold and scored by the RSSE of the held-out
/// curve, summed over folds. Ties go to the smallest lambda, then the
/// smallest rank. `cfg.lambda` is overridden by the grid.
CvResult loo_cv(const KernelStack& stack_template, const CurveVec& inputs, const CurveVec& targets, const CvSpec& spec,
                const FitConfig& cfg);

/// CSV with header `lambda,rank,cv_rsse,valid`.
std::string cv_table_csv(const CvResult& result);

} // namespace movkl
