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

#include "movkl/learn.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

namespace movkl {

void FitConfig::validate() const
{
    require(std::isfinite(lambda) && lambda > 0.0, ErrorKind::Config, "lambda must be positive");
    require(r >= 1.0, ErrorKind::Config, "norm exponent r must be >= 1");
    require(mkl_tol > 0.0, ErrorKind::Config, "mkl_tol must be positive");
    require(mkl_max_iter >= 1, ErrorKind::Config, "mkl_max_iter must be >= 1");
    solve.validate();
}

Eigen::VectorXd weight_update(const Eigen::VectorXd& fnorms_sq, double r)
{
    require(fnorms_sq.size() >= 1, ErrorKind::Dimension, "weight_update needs at least one norm");
    require(std::isfinite(r) && r >= 1.0, ErrorKind::Domain, "weight_update needs 1 <= r < inf");
    Eigen::VectorXd s = fnorms_sq;
    for (Eigen::Index k = 0; k < s.size(); ++k) {
        require(std::isfinite(s[k]) && s[k] >= -1e-10, ErrorKind::Domain, "squared kernel norms must be >= 0");
        s[k] = std::max(s[k], 0.0);
    }
    require(s.maxCoeff() > 0.0, ErrorKind::Degenerate, "all kernel norms are zero; the model collapsed");

    // Scale out the largest norm first so tiny or huge values stay representable.
    const double top = s.maxCoeff();
    const Eigen::ArrayXd t = s.array() / top;
    const double denom = std::pow(t.pow(r / (r + 1.0)).sum(), 1.0 / r);
    Eigen::VectorXd d = (t.pow(1.0 / (r + 1.0)) / denom).matrix();
    for (Eigen::Index k = 0; k < d.size(); ++k)
        if (s[k] == 0.0)
            d[k] = 0.0;
    return d;
}

namespace {

// T_o alpha for every distinct operator, keyed by term index.
std::vector<Eigen::MatrixXd> applied_per_term(const BlockGram& g, const Eigen::MatrixXd& alpha)
{
    std::vector<Eigen::MatrixXd> out(g.terms());
    for (std::size_t k = 0; k < g.terms(); ++k) {
        std::optional<std::size_t> seen;
        for (std::size_t p = 0; p < k && !seen; ++p)
            if (g.op(p) == g.op(k))
                seen = p;
        out[k] = seen ? out[*seen] : g.op(k).apply_rows(alpha);
    }
    return out;
}

} // namespace

Eigen::VectorXd fk_norms_sq(const BlockGram& g, const Eigen::MatrixXd& alpha)
{
    require(static_cast<std::size_t>(alpha.rows()) == g.n() && static_cast<std::size_t>(alpha.cols()) == g.m(),
            ErrorKind::Dimension, "fk_norms_sq: alpha has the wrong shape");
    const Eigen::VectorXd& w = g.output_grid()->weight_vector();
    const auto applied = applied_per_term(g, alpha);
    Eigen::VectorXd out(static_cast<Eigen::Index>(g.terms()));
    for (std::size_t k = 0; k < g.terms(); ++k) {
        const double d = g.weights()[static_cast<Eigen::Index>(k)];
        out[static_cast<Eigen::Index>(k)] =
            d == 0.0 ? 0.0 : d * d * detail::weighted_frobenius(w, g.scalar_gram(k) * applied[k], alpha);
    }
    return out;
}

double fk_norm_sq(const BlockGram& g, const CurveVec& alpha, std::size_t k)
{
    require(k < g.terms(), ErrorKind::Dimension, "fk_norm_sq: term index out of range");
    require(same_grid(alpha.grid(), g.output_grid()), ErrorKind::Dimension, "fk_norm_sq: alpha is not on the output grid");
    const double d = g.weights()[static_cast<Eigen::Index>(k)];
    if (d == 0.0)
        return 0.0;
    const Eigen::VectorXd& w = g.output_grid()->weight_vector();
    return d * d * detail::weighted_frobenius(w, g.scalar_gram(k) * g.op(k).apply_rows(alpha.rows()), alpha.rows());
}

double primal_objective(const BlockGram& g, const Eigen::MatrixXd& alpha, const Eigen::MatrixXd& y, double lambda)
{
    const Eigen::VectorXd& w = g.output_grid()->weight_vector();
    const auto applied = applied_per_term(g, alpha);
    double reg = 0.0;
    Eigen::MatrixXd fitted = Eigen::MatrixXd::Zero(alpha.rows(), alpha.cols());
    for (std::size_t k = 0; k < g.terms(); ++k) {
        const double d = g.weights()[static_cast<Eigen::Index>(k)];
        if (d == 0.0)
            continue;
        const Eigen::MatrixXd kk = g.scalar_gram(k) * applied[k];
        // ||f_k||^2 / d_k = d_k <K_k alpha, alpha>
        reg += d * detail::weighted_frobenius(w, kk, alpha);
        fitted += d * kk;
    }
    const Eigen::MatrixXd resid = y - fitted;
    return 0.5 * reg + detail::weighted_frobenius(w, resid, resid) / (2.0 * lambda);
}

FitState fit_on_gram(const BlockGram& g0, const CurveVec& targets, const FitConfig& cfg)
{
    cfg.validate();
    require(targets.count() == g0.n(), ErrorKind::Dimension, "fit: target count does not match the gram");
    const auto m_terms = static_cast<Eigen::Index>(g0.terms());
    const Eigen::VectorXd& w = g0.output_grid()->weight_vector();

    FitState st;
    st.weights = Eigen::VectorXd::Constant(m_terms, 1.0 / static_cast<double>(m_terms));
    st.alpha = Eigen::MatrixXd::Zero(targets.rows().rows(), targets.rows().cols());

    for (int t = 1; t <= cfg.mkl_max_iter; ++t) {
        const BlockGram g = g0.with_weights(st.weights);
        const Eigen::MatrixXd previous = st.alpha;

        std::pair<CurveVec, SolveReport> sol{CurveVec::zeros(targets.grid(), targets.count()), {}};
        if (single_operator(g)) {
            sol = kron_solve(g, cfg.lambda, targets);
        } else {
            sol = gauss_seidel_solve(g, cfg.lambda, targets, cfg.solve, CurveVec(targets.grid(), st.alpha));
            if (!sol.second.converged) {
                std::ostringstream os;
                os << "alpha-step " << t << " did not converge after " << sol.second.iterations
                   << " Gauss-Seidel sweeps (relative residual " << sol.second.final_residual << ")";
                throw FitError(ErrorKind::Convergence, os.str(), st.objective_trace);
            }
        }
        st.alpha = sol.first.rows();
        st.solver_iterations.push_back(sol.second.iterations);
        st.objective_trace.push_back(primal_objective(g, st.alpha, targets.rows(), cfg.lambda));
        st.iterations = t;

        const Eigen::MatrixXd diff = st.alpha - previous;
        if (std::sqrt(detail::weighted_frobenius(w, diff, diff)) < cfg.mkl_tol) {
            st.converged = true;
            break;
        }
        if (t == cfg.mkl_max_iter || std::isinf(cfg.r))
            continue;
        st.weights = weight_update(fk_norms_sq(g, st.alpha), cfg.r);
    }
    return st;
}

MovklModel movkl_fit(const KernelStack& stack, const CurveVec& inputs, const CurveVec& targets, const FitConfig& cfg)
{
    require(inputs.count() >= 1, ErrorKind::Dimension, "fit needs at least one sample");
    require(inputs.count() == targets.count(), ErrorKind::Dimension, "input and target counts differ");
    require(same_grid(targets.grid(), stack.output_grid()), ErrorKind::Dimension,
            "targets are not on the kernel stack's output grid");
    const BlockGram g = assemble_gram(stack, inputs);
    FitState st = fit_on_gram(g, targets, cfg);
    auto terms = stack.terms();
    for (std::size_t k = 0; k < terms.size(); ++k)
        terms[k].weight = st.weights[static_cast<Eigen::Index>(k)];
    KernelStack fitted(std::move(terms), cfg.r);
    return MovklModel{CurveVec(targets.grid(), std::move(st.alpha)),
                      st.weights,
                      std::move(fitted),
                      inputs,
                      cfg.lambda,
                      cfg.r,
                      std::move(st.objective_trace),
                      std::move(st.solver_iterations),
                      st.iterations,
                      st.converged};
}

MovklModel krr_fit(const OvKernelTerm& term, const CurveVec& inputs, const CurveVec& targets, const FitConfig& cfg)
{
    OvKernelTerm single = term;
    single.weight = 1.0;
    FitConfig c = cfg;
    c.r = std::isinf(cfg.r) ? cfg.r : std::max(1.0, cfg.r);
    return movkl_fit(KernelStack({single}, c.r), inputs, targets, c);
}

Eigen::MatrixXd predict_from_cross(const std::vector<OutputOperator>& ops, const Eigen::VectorXd& weights,
                                   const std::vector<Eigen::MatrixXd>& cross, const Eigen::MatrixXd& alpha)
{
    require(ops.size() == cross.size() && static_cast<std::size_t>(weights.size()) == ops.size(), ErrorKind::Dimension,
            "predict: term count mismatch");
    const Eigen::Index nz = cross.empty() ? 0 : cross.front().cols();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(nz, alpha.cols());
    // Group by operator so T is applied once per distinct operator.
    std::vector<std::pair<const OutputOperator*, Eigen::MatrixXd>> acc;
    for (std::size_t k = 0; k < ops.size(); ++k) {
        const double d = weights[static_cast<Eigen::Index>(k)];
        if (d == 0.0)
            continue;
        require(cross[k].rows() == alpha.rows(), ErrorKind::Dimension, "predict: cross gram has the wrong shape");
        auto it = std::find_if(acc.begin(), acc.end(), [&](const auto& a) { return *a.first == ops[k]; });
        if (it == acc.end())
            acc.emplace_back(&ops[k], d * cross[k].transpose());
        else
            it->second += d * cross[k].transpose();
    }
    for (const auto& [op, c] : acc)
        out += op->apply_rows(c * alpha);
    return out;
}

CurveVec predict(const MovklModel& model, const CurveVec& x_new)
{
    require(same_grid(x_new.grid(), model.input_grid()), ErrorKind::Dimension, "predict: input is not on the model's input grid");
    const auto& terms = model.stack.terms();
    std::vector<OutputOperator> ops;
    std::vector<Eigen::MatrixXd> cross;
    for (std::size_t k = 0; k < terms.size(); ++k) {
        ops.push_back(terms[k].op);
        std::optional<std::size_t> seen;
        for (std::size_t p = 0; p < k && !seen; ++p)
            if (terms[p].scalar == terms[k].scalar)
                seen = p;
        if (model.weights[static_cast<Eigen::Index>(k)] == 0.0)
            cross.emplace_back(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(model.train_inputs.count()),
                                                     static_cast<Eigen::Index>(x_new.count())));
        else
            cross.push_back(seen && cross[*seen].size() && model.weights[static_cast<Eigen::Index>(*seen)] != 0.0
                                ? cross[*seen]
                                : terms[k].scalar.cross(model.train_inputs, x_new));
    }
    return CurveVec(model.output_grid(), predict_from_cross(ops, model.weights, cross, model.alpha.rows()));
}

Curve predict(const MovklModel& model, const Curve& x_new)
{
    const Curve one[] = {x_new};
    return predict(model, CurveVec(one)).curve(0);
}

} // namespace movkl
