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

#include "movkl/linsolve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "movkl/errors.hpp"

namespace movkl {

namespace {

double wnorm(const Eigen::VectorXd& w, const Eigen::MatrixXd& rows)
{
    return std::sqrt(detail::weighted_frobenius(w, rows, rows));
}

void check_system(const BlockGram& g, double ridge, const CurveVec& y)
{
    require(std::isfinite(ridge) && ridge > 0.0, ErrorKind::Domain, "ridge must be positive");
    require(y.count() == g.n(), ErrorKind::Dimension,
            "right-hand side has " + std::to_string(y.count()) + " curves, system has " + std::to_string(g.n()));
    require(same_grid(y.grid(), g.output_grid()), ErrorKind::Dimension, "right-hand side is not on the output grid");
}

constexpr std::size_t kMaxDenseBlock = 2000;

} // namespace

void SolveConfig::validate() const
{
    require(outer_tol > 0.0 && inner_tol > 0.0, ErrorKind::Config, "solver tolerances must be positive");
    require(outer_max_iter >= 1 && inner_max_iter >= 1, ErrorKind::Config, "solver iteration caps must be >= 1");
}

const char* to_string(SolverKind kind) noexcept
{
    switch (kind) {
    case SolverKind::Dense: return "dense";
    case SolverKind::Kronecker: return "kron";
    case SolverKind::GaussSeidel: return "gauss-seidel";
    }
    return "?";
}

double relative_residual(const BlockGram& g, double ridge, const Eigen::MatrixXd& alpha, const Eigen::MatrixXd& y)
{
    const Eigen::VectorXd& w = g.output_grid()->weight_vector();
    const Eigen::MatrixXd r = g.apply(alpha) + ridge * alpha - y;
    const double ny = wnorm(w, y);
    return wnorm(w, r) / (ny > 0.0 ? ny : 1.0);
}

std::pair<CurveVec, SolveReport> dense_solve(const BlockGram& g, double ridge, const CurveVec& y)
{
    check_system(g, ridge, y);
    const Eigen::Index n = static_cast<Eigen::Index>(g.n());
    const Eigen::Index m = static_cast<Eigen::Index>(g.m());
    Eigen::MatrixXd a = g.densify(5000);
    a.diagonal().array() += ridge;

    // Sample-major flattening: entry (i, j) -> i*m + j.
    Eigen::MatrixXd yt = y.rows().transpose();
    const Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(yt.data(), n * m);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    const Eigen::VectorXd x = lu.solve(b);
    require(x.allFinite(), ErrorKind::Numerical, "dense solve produced non-finite values");

    Eigen::MatrixXd alpha = Eigen::Map<const Eigen::MatrixXd>(x.data(), m, n).transpose();
    SolveReport rep;
    rep.solver_kind = SolverKind::Dense;
    rep.iterations = 1;
    rep.final_residual = relative_residual(g, ridge, alpha, y.rows());
    rep.converged = true;
    return {CurveVec(y.grid(), std::move(alpha)), rep};
}

std::pair<CurveVec, SolveReport> kron_solve(const Eigen::MatrixXd& gram, const OutputOperator& op, double ridge,
                                            const CurveVec& y)
{
    require(std::isfinite(ridge) && ridge > 0.0, ErrorKind::Domain, "ridge must be positive");
    require(gram.rows() == gram.cols() && static_cast<std::size_t>(gram.rows()) == y.count(), ErrorKind::Dimension,
            "kron_solve: gram size does not match the number of curves");
    require(same_grid(y.grid(), op.grid()), ErrorKind::Dimension, "kron_solve: right-hand side is not on the operator grid");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
    if (es.info() != Eigen::Success)
        fail(ErrorKind::Numerical, "kron_solve: scalar gram eigendecomposition failed");
    const Eigen::VectorXd& lam = es.eigenvalues();
    const Eigen::MatrixXd& u = es.eigenvectors();
    const Spectrum& sp = op.spectrum();
    const Eigen::VectorXd& w = op.grid()->weight_vector();

    const Eigen::MatrixXd& yr = y.rows();
    Eigen::MatrixXd c = u.transpose() * (yr * w.asDiagonal()) * sp.vectors;
    for (Eigen::Index a = 0; a < c.rows(); ++a) {
        for (Eigen::Index b = 0; b < c.cols(); ++b) {
            const double denom = lam[a] * sp.values[b] + ridge;
            require(denom > 0.0, ErrorKind::Numerical, "kron_solve: system is not positive definite");
            c(a, b) *= 1.0 / denom - 1.0 / ridge;
        }
    }
    Eigen::MatrixXd alpha = yr / ridge + u * c * sp.vectors.transpose();

    SolveReport rep;
    rep.solver_kind = SolverKind::Kronecker;
    rep.iterations = 1;
    rep.converged = true;
    {
        const Eigen::MatrixXd r = gram * op.apply_rows(alpha) + ridge * alpha - yr;
        const double ny = wnorm(w, yr);
        rep.final_residual = wnorm(w, r) / (ny > 0.0 ? ny : 1.0);
    }
    return {CurveVec(y.grid(), std::move(alpha)), rep};
}

bool single_operator(const BlockGram& g) { return g.groups().size() <= 1; }

std::pair<CurveVec, SolveReport> kron_solve(const BlockGram& g, double ridge, const CurveVec& y)
{
    check_system(g, ridge, y);
    const auto groups = g.groups();
    if (groups.size() > 1)
        fail(ErrorKind::Precondition,
             "kron_solve requires all active terms to share one operator; use gauss_seidel_solve for mixtures");
    if (groups.empty()) {
        SolveReport rep;
        rep.solver_kind = SolverKind::Kronecker;
        rep.iterations = 1;
        rep.converged = true;
        return {CurveVec(y.grid(), y.rows() / ridge), rep};
    }
    return kron_solve(groups.front().gram, groups.front().op, ridge, y);
}

SplitResult split_block_solve(const std::vector<DiagTerm>& terms, double ridge, const Eigen::VectorXd& s,
                              const SolveConfig& cfg, const Eigen::VectorXd* warm)
{
    require(std::isfinite(ridge) && ridge > 0.0, ErrorKind::Domain, "ridge must be positive");
    std::vector<const DiagTerm*> active;
    for (const auto& t : terms) {
        require(std::isfinite(t.coeff) && t.coeff >= 0.0, ErrorKind::Domain, "diagonal coefficient must be >= 0");
        require(static_cast<Eigen::Index>(t.op.size()) == s.size(), ErrorKind::Dimension,
                "split_block_solve: operator size mismatch");
        if (t.coeff > 0.0)
            active.push_back(&t);
    }

    SplitResult out;
    // Identity terms only shift the spectrum, so they join the ridge.
    double shift = ridge;
    std::vector<const DiagTerm*> coupled;
    for (const auto* t : active) {
        if (t->op.kind() == OperatorKind::Identity)
            shift += t->coeff;
        else
            coupled.push_back(t);
    }
    if (coupled.empty()) {
        out.value = s / shift;
        return out;
    }
    if (coupled.size() == 1) {
        out.value = coupled.front()->op.shifted_solve(shift, coupled.front()->coeff, s);
        out.iterations = 1;
        return out;
    }

    const Eigen::VectorXd& w = active.front()->op.grid()->weight_vector();
    auto norm = [&](const Eigen::VectorXd& v) { return std::sqrt(detail::weighted_dot(w, v, v)); };
    auto block_apply = [&](const Eigen::VectorXd& v) {
        Eigen::VectorXd r = ridge * v;
        for (const auto* t : active)
            r += t->coeff * t->op.apply(v);
        return r;
    };

    // Consensus ADMM over one copy z_k per coupled term. Each term donates
    // c_k * min eig(T_k) to a common shift that is then spread evenly, so the
    // local problems are (c_k (T_k - mu_k) + shift/P) z_k = s/P + multiplier terms.
    const std::size_t nk = coupled.size();
    std::vector<double> mu(nk, 0.0);
    for (std::size_t k = 0; k < nk; ++k) {
        const auto& op = coupled[k]->op;
        if (op.rank() == op.size())
            mu[k] = std::max(0.0, op.spectrum().values.minCoeff());
        shift += coupled[k]->coeff * mu[k];
    }
    const auto p = static_cast<double>(nk);
    const double local = shift / p;
    double top = 0.0;
    double need = 0.0;
    for (std::size_t k = 0; k < nk; ++k) {
        top = std::max(top, coupled[k]->coeff * (coupled[k]->op.max_eigenvalue() - mu[k]));
        need = std::max(need, coupled[k]->coeff * mu[k] - local);
    }
    const double rho = std::max(std::sqrt(local * (top + local)), 1.01 * need + 1e-12);
    constexpr double relax = 1.6;
    const double target = cfg.inner_tol * std::max(1.0, norm(s));
    const Eigen::VectorXd share = s / p;
    std::vector<double> own(nk);
    for (std::size_t k = 0; k < nk; ++k)
        own[k] = local - coupled[k]->coeff * mu[k];

    Eigen::VectorXd x = warm ? *warm : Eigen::VectorXd::Zero(s.size());
    std::vector<Eigen::VectorXd> u(nk), z(nk);
    for (std::size_t k = 0; k < nk; ++k)
        u[k] = (share - coupled[k]->coeff * coupled[k]->op.apply(x) - own[k] * x) / rho;

    double res = norm(block_apply(x) - s);
    int it = 0;
    while (res > target && it < cfg.inner_max_iter) {
        ++it;
        Eigen::VectorXd mean = Eigen::VectorXd::Zero(s.size());
        for (std::size_t k = 0; k < nk; ++k) {
            z[k] = coupled[k]->op.shifted_solve(own[k] + rho, coupled[k]->coeff, share + rho * (x - u[k]));
            z[k] = relax * z[k] + (1.0 - relax) * x;
            mean += z[k] + u[k];
        }
        x = mean / p;
        for (std::size_t k = 0; k < nk; ++k)
            u[k] += z[k] - x;
        res = norm(block_apply(x) - s);
    }
    out.iterations = it;
    out.residual = res;

    if (res > target) {
        const auto m = static_cast<std::size_t>(s.size());
        if (m > kMaxDenseBlock)
            fail(ErrorKind::Convergence, "split_block_solve: no convergence after " + std::to_string(it) +
                                             " iterations and block too large for a dense fallback");
        log_warning("split_block_solve: inner iteration cap reached (residual " + std::to_string(res) +
                    "), falling back to a dense block solve");
        Eigen::MatrixXd a = ridge * Eigen::MatrixXd::Identity(s.size(), s.size());
        for (const auto* t : active)
            a += t->coeff * t->op.dense();
        x = a.partialPivLu().solve(s);
        require(x.allFinite(), ErrorKind::Numerical, "split_block_solve: dense fallback failed");
        out.fell_back = true;
        out.residual = norm(block_apply(x) - s);
    }
    out.value = std::move(x);
    return out;
}

Curve split_block_solve(const std::vector<DiagTerm>& terms, double ridge, const Curve& s, const SolveConfig& cfg)
{
    for (const auto& t : terms)
        require(same_grid(t.op.grid(), s.grid()), ErrorKind::Dimension, "split_block_solve: grid mismatch");
    return Curve(s.grid(), split_block_solve(terms, ridge, s.values(), cfg).value);
}

std::pair<CurveVec, SolveReport> gauss_seidel_solve(const BlockGram& g, double ridge, const CurveVec& y,
                                                    const SolveConfig& cfg, const std::optional<CurveVec>& warm)
{
    check_system(g, ridge, y);
    cfg.validate();
    const Eigen::Index n = static_cast<Eigen::Index>(g.n());
    const Eigen::Index m = static_cast<Eigen::Index>(g.m());
    const Eigen::VectorXd& w = g.output_grid()->weight_vector();
    const Eigen::MatrixXd& yr = y.rows();

    SolveReport rep;
    rep.solver_kind = SolverKind::GaussSeidel;

    const auto groups = g.groups();
    if (groups.empty()) {
        rep.iterations = 1;
        rep.converged = true;
        return {CurveVec(y.grid(), yr / ridge), rep};
    }

    Eigen::MatrixXd alpha = Eigen::MatrixXd::Zero(n, m);
    if (warm) {
        require(warm->count() == g.n() && same_grid(warm->grid(), g.output_grid()), ErrorKind::Dimension,
                "gauss_seidel_solve: warm start has the wrong shape");
        alpha = warm->rows();
    }

    // Cached T_o alpha_j for every operator group.
    std::vector<Eigen::MatrixXd> applied;
    applied.reserve(groups.size());
    for (const auto& grp : groups)
        applied.push_back(grp.op.apply_rows(alpha));

    std::vector<DiagTerm> diag;
    diag.reserve(groups.size());
    for (const auto& grp : groups)
        diag.push_back(DiagTerm{0.0, grp.op});

    Eigen::MatrixXd previous(n, m);
    Eigen::VectorXd s(m);
    for (int sweep = 1; sweep <= cfg.outer_max_iter; ++sweep) {
        previous = alpha;
        for (Eigen::Index i = 0; i < n; ++i) {
            s = yr.row(i).transpose();
            for (std::size_t o = 0; o < groups.size(); ++o) {
                const auto& gm = groups[o].gram;
                s.noalias() -= (gm.row(i) * applied[o]).transpose();
                s += gm(i, i) * applied[o].row(i).transpose();
                diag[o].coeff = gm(i, i);
            }
            Eigen::VectorXd next;
            if (groups.size() == 1) {
                next = groups.front().op.shifted_solve(ridge, diag.front().coeff, s);
            } else {
                const Eigen::VectorXd current = alpha.row(i).transpose();
                SplitResult sr = split_block_solve(diag, ridge, s, cfg, &current);
                rep.inner_iterations += sr.iterations;
                rep.inner_fallbacks += sr.fell_back ? 1 : 0;
                next = std::move(sr.value);
            }
            require(next.allFinite(), ErrorKind::Numerical, "gauss_seidel_solve: non-finite iterate");
            alpha.row(i) = next.transpose();
            for (std::size_t o = 0; o < groups.size(); ++o)
                applied[o].row(i) = groups[o].op.apply(next).transpose();
        }
        rep.iterations = sweep;

        const double change = wnorm(w, alpha - previous) / std::max(1.0, wnorm(w, alpha));
        if (cfg.track_residuals)
            rep.residual_history.push_back(relative_residual(g, ridge, alpha, yr));
        if (change <= cfg.outer_tol) {
            rep.final_residual = cfg.track_residuals ? rep.residual_history.back() : relative_residual(g, ridge, alpha, yr);
            if (rep.final_residual <= cfg.outer_tol) {
                rep.converged = true;
                break;
            }
        }
    }
    if (!rep.converged)
        rep.final_residual = relative_residual(g, ridge, alpha, yr);
    return {CurveVec(y.grid(), std::move(alpha)), rep};
}

} // namespace movkl
