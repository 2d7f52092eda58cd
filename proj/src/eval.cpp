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

#include "movkl/eval.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "movkl/errors.hpp"

namespace movkl {

double rsse(const CurveVec& truth, const CurveVec& pred)
{
    require(truth.count() == pred.count(), ErrorKind::Dimension, "rsse: curve counts differ");
    require(same_grid(truth.grid(), pred.grid()), ErrorKind::Dimension, "rsse: curves live on different grids");
    const Eigen::MatrixXd diff = truth.rows() - pred.rows();
    return detail::weighted_frobenius(truth.grid()->weight_vector(), diff, diff);
}

double lcr(const CurveVec& truth_labels, const CurveVec& pred, double threshold)
{
    require(truth_labels.count() == pred.count() && truth_labels.samples() == pred.samples(), ErrorKind::Dimension,
            "lcr: shapes differ");
    require(std::isfinite(threshold), ErrorKind::Domain, "lcr: threshold must be finite");
    const auto& t = truth_labels.rows();
    const auto& p = pred.rows();
    if (t.size() == 0)
        return 100.0;
    std::size_t hits = 0;
    for (Eigen::Index i = 0; i < t.rows(); ++i) {
        for (Eigen::Index j = 0; j < t.cols(); ++j) {
            const double v = t(i, j);
            const bool one = std::abs(v - 1.0) <= 1e-9;
            require(one || std::abs(v) <= 1e-9, ErrorKind::Data,
                    "lcr: truth label (" + std::to_string(i) + ", " + std::to_string(j) + ") is not 0 or 1");
            hits += (p(i, j) >= threshold) == one ? 1 : 0;
        }
    }
    return 100.0 * static_cast<double>(hits) / static_cast<double>(t.size());
}

CvResult loo_cv(const KernelStack& stack_template, const CurveVec& inputs, const CurveVec& targets, const CvSpec& spec,
                const FitConfig& cfg)
{
    const std::size_t n = inputs.count();
    require(n >= 2, ErrorKind::Dimension, "loo_cv needs at least two curves");
    require(targets.count() == n, ErrorKind::Dimension, "loo_cv: input and target counts differ");
    require(!spec.lambda_grid.empty(), ErrorKind::Config, "loo_cv: empty lambda grid");
    for (double l : spec.lambda_grid)
        require(std::isfinite(l) && l > 0.0, ErrorKind::Config, "loo_cv: lambda candidates must be positive");

    std::vector<std::size_t> ranks{0};
    if (stack_template.has_integral()) {
        require(!spec.rank_grid.empty(), ErrorKind::Config, "loo_cv: empty rank grid for a stack with integral operators");
        ranks = spec.rank_grid;
        for (std::size_t q : ranks)
            require(q >= 1, ErrorKind::Config, "loo_cv: ranks must be >= 1");
    }

    // table[l][q]
    std::vector<std::vector<CvRow>> table(spec.lambda_grid.size(), std::vector<CvRow>(ranks.size()));
    for (std::size_t qi = 0; qi < ranks.size(); ++qi) {
        const KernelStack stack = ranks[qi] == 0 ? stack_template : stack_template.with_integral_rank(ranks[qi]);
        const BlockGram full = assemble_gram(stack, inputs);
        for (std::size_t li = 0; li < spec.lambda_grid.size(); ++li)
            table[li][qi] = CvRow{spec.lambda_grid[li], ranks[qi], 0.0, true};

        std::vector<std::size_t> keep(n - 1);
        for (std::size_t hold = 0; hold < n; ++hold) {
            for (std::size_t a = 0, b = 0; a < n; ++a)
                if (a != hold)
                    keep[b++] = a;
            const BlockGram g = full.subset(keep);
            const CurveVec train_y = targets.select(keep);
            std::vector<Eigen::MatrixXd> cross(full.terms());
            for (std::size_t k = 0; k < full.terms(); ++k) {
                cross[k].resize(static_cast<Eigen::Index>(n - 1), 1);
                for (std::size_t a = 0; a < n - 1; ++a)
                    cross[k](static_cast<Eigen::Index>(a), 0) =
                        full.scalar_gram(k)(static_cast<Eigen::Index>(keep[a]), static_cast<Eigen::Index>(hold));
            }
            const Eigen::RowVectorXd truth = targets.rows().row(static_cast<Eigen::Index>(hold));
            for (std::size_t li = 0; li < spec.lambda_grid.size(); ++li) {
                CvRow& row = table[li][qi];
                if (!row.valid)
                    continue;
                FitConfig c = cfg;
                c.lambda = spec.lambda_grid[li];
                try {
                    const FitState st = fit_on_gram(g, train_y, c);
                    const Eigen::MatrixXd pred = predict_from_cross(full.ops(), st.weights, cross, st.alpha);
                    const Eigen::MatrixXd diff = pred - truth;
                    const double err = detail::weighted_frobenius(targets.grid()->weight_vector(), diff, diff);
                    if (std::isfinite(err))
                        row.cv_rsse += err;
                    else
                        row.valid = false;
                } catch (const Error&) {
                    row.valid = false;
                }
            }
        }
    }

    CvResult res;
    bool found = false;
    for (std::size_t li = 0; li < spec.lambda_grid.size(); ++li) {
        for (std::size_t qi = 0; qi < ranks.size(); ++qi) {
            const CvRow& row = table[li][qi];
            res.table.push_back(row);
            if (!row.valid)
                continue;
            const bool better = !found || row.cv_rsse < res.best_rsse ||
                                (row.cv_rsse == res.best_rsse &&
                                 (row.lambda < res.best_lambda || (row.lambda == res.best_lambda && row.rank < res.best_rank)));
            if (better) {
                found = true;
                res.best_rsse = row.cv_rsse;
                res.best_lambda = row.lambda;
                res.best_rank = row.rank;
            }
        }
    }
    require(found, ErrorKind::Convergence, "loo_cv: every candidate failed");
    return res;
}

std::string cv_table_csv(const CvResult& result)
{
    std::ostringstream os;
    os.precision(17);
    os << "lambda,rank,cv_rsse,valid\n";
    for (const auto& row : result.table)
        os << row.lambda << ',' << row.rank << ',' << row.cv_rsse << ',' << (row.valid ? 1 : 0) << '\n';
    return os.str();
}

} // namespace movkl
