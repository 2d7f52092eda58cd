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

#include "movkl/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "movkl/errors.hpp"

namespace movkl {

// ---------------------------------------------------------------- scalar kernels

ScalarKernel ScalarKernel::gaussian(double bandwidth, bool normalize)
{
    require(std::isfinite(bandwidth) && bandwidth > 0.0, ErrorKind::Domain, "gaussian bandwidth must be positive");
    ScalarKernel k;
    k.kind_ = ScalarKind::Gaussian;
    k.bandwidth_ = bandwidth;
    k.normalize_ = normalize;
    return k;
}

ScalarKernel ScalarKernel::polynomial(int degree, double offset, bool normalize)
{
    require(degree >= 1 && degree <= 3, ErrorKind::Domain, "polynomial degree must be 1, 2 or 3");
    require(std::isfinite(offset) && offset >= 0.0, ErrorKind::Domain, "polynomial offset must be >= 0");
    ScalarKernel k;
    k.kind_ = ScalarKind::Polynomial;
    k.degree_ = degree;
    k.offset_ = offset;
    k.normalize_ = normalize;
    return k;
}

double ScalarKernel::eval_raw(const Eigen::VectorXd& w, const Eigen::Ref<const Eigen::VectorXd>& x,
                              const Eigen::Ref<const Eigen::VectorXd>& z) const
{
    if (kind_ == ScalarKind::Gaussian) {
        const double d2 = (w.array() * (x - z).array().square()).sum();
        return scale_ * std::exp(-d2 / (2.0 * bandwidth_ * bandwidth_));
    }
    const double base = detail::weighted_dot(w, x, z) + offset_;
    double v = base;
    for (int p = 1; p < degree_; ++p)
        v *= base;
    return scale_ * v;
}

ScalarKernel ScalarKernel::with_scale(double factor) const
{
    require(std::isfinite(factor) && factor > 0.0, ErrorKind::Domain, "kernel scale must be positive and finite");
    ScalarKernel k = *this;
    k.scale_ = factor;
    return k;
}

Eigen::MatrixXd ScalarKernel::prepared(const CurveVec& a) const
{
    if (!normalize_)
        return a.rows();
    const Eigen::VectorXd& w = a.grid()->weight_vector();
    Eigen::MatrixXd out = a.rows();
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
        const double nrm = std::sqrt(detail::weighted_dot(w, out.row(i).transpose(), out.row(i).transpose()));
        if (nrm > 0.0)
            out.row(i) /= nrm;
    }
    return out;
}

double ScalarKernel::eval(const Curve& x, const Curve& z) const
{
    require(same_grid(x.grid(), z.grid()), ErrorKind::Dimension, "scalar kernel: curves live on different grids");
    const Eigen::VectorXd& w = x.grid()->weight_vector();
    if (!normalize_)
        return eval_raw(w, x.values(), z.values());
    auto unit = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
        const double nrm = std::sqrt(detail::weighted_dot(w, v, v));
        return nrm > 0.0 ? Eigen::VectorXd(v / nrm) : v;
    };
    return eval_raw(w, unit(x.values()), unit(z.values()));
}

Eigen::MatrixXd ScalarKernel::gram(const CurveVec& a) const
{
    const Eigen::MatrixXd x = prepared(a);
    const Eigen::VectorXd& w = a.grid()->weight_vector();
    const Eigen::Index n = x.rows();
    Eigen::MatrixXd g(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            const double v = eval_raw(w, x.row(i).transpose(), x.row(j).transpose());
            g(i, j) = v;
            g(j, i) = v;
        }
    }
    return g;
}

Eigen::MatrixXd ScalarKernel::cross(const CurveVec& a, const CurveVec& b) const
{
    require(same_grid(a.grid(), b.grid()), ErrorKind::Dimension, "scalar kernel: curve sets live on different grids");
    const Eigen::MatrixXd xa = prepared(a);
    const Eigen::MatrixXd xb = prepared(b);
    const Eigen::VectorXd& w = a.grid()->weight_vector();
    Eigen::MatrixXd g(xa.rows(), xb.rows());
    for (Eigen::Index i = 0; i < xa.rows(); ++i)
        for (Eigen::Index j = 0; j < xb.rows(); ++j)
            g(i, j) = eval_raw(w, xa.row(i).transpose(), xb.row(j).transpose());
    return g;
}

std::string ScalarKernel::describe() const
{
    std::ostringstream os;
    os.precision(6);
    if (kind_ == ScalarKind::Gaussian)
        os << "gaussian(s=" << bandwidth_ << ")";
    else
        os << "poly(p=" << degree_ << ",c=" << offset_ << ")";
    if (normalize_)
        os << "[norm]";
    if (scale_ != 1.0)
        os << "*" << scale_;
    return os.str();
}

// ---------------------------------------------------------------- operators

const char* to_string(OperatorKind kind) noexcept
{
    switch (kind) {
    case OperatorKind::Identity: return "identity";
    case OperatorKind::Multiplication: return "multiplication";
    case OperatorKind::Integral: return "integral";
    }
    return "?";
}

struct OutputOperator::IntegralData {
    Eigen::MatrixXd kernel;   // exp(-|t_j - t_l|)
    Eigen::VectorXd values;   // retained eigenvalues, descending
    Eigen::MatrixXd vectors;  // W-orthonormal eigenvectors (m x q)
};

OutputOperator::OutputOperator(OperatorKind kind, GridPtr grid, std::size_t rank)
    : kind_(kind), grid_(std::move(grid)), rank_(rank)
{
    require(grid_ != nullptr, ErrorKind::Dimension, "operator without grid");
}

OutputOperator OutputOperator::identity(GridPtr grid)
{
    const std::size_t m = grid->size();
    OutputOperator op(OperatorKind::Identity, std::move(grid), m);
    auto s = std::make_shared<Spectrum>();
    s->values = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(m));
    s->vectors = op.grid_->weight_vector().cwiseSqrt().cwiseInverse().asDiagonal();
    op.spectrum_ = std::move(s);
    return op;
}

OutputOperator OutputOperator::multiplication(GridPtr grid)
{
    const std::size_t m = grid->size();
    OutputOperator op(OperatorKind::Multiplication, std::move(grid), m);
    const auto pts = op.grid_->points();
    op.diag_.resize(static_cast<Eigen::Index>(m));
    for (std::size_t j = 0; j < m; ++j)
        op.diag_[static_cast<Eigen::Index>(j)] = std::exp(-pts[j] * pts[j]);

    std::vector<Eigen::Index> order(m);
    for (std::size_t j = 0; j < m; ++j)
        order[j] = static_cast<Eigen::Index>(j);
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return op.diag_[a] > op.diag_[b]; });
    auto s = std::make_shared<Spectrum>();
    s->values.resize(static_cast<Eigen::Index>(m));
    s->vectors = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    const Eigen::VectorXd& w = op.grid_->weight_vector();
    for (std::size_t c = 0; c < m; ++c) {
        const auto col = static_cast<Eigen::Index>(c);
        s->values[col] = op.diag_[order[c]];
        s->vectors(order[c], col) = 1.0 / std::sqrt(w[order[c]]);
    }
    op.spectrum_ = std::move(s);
    return op;
}

OutputOperator OutputOperator::integral(GridPtr grid, std::size_t rank)
{
    const std::size_t m = grid->size();
    if (rank == 0)
        rank = std::min(m, kDefaultRank);
    require(rank <= m, ErrorKind::Domain, "integral operator rank exceeds grid size");
    OutputOperator op(OperatorKind::Integral, std::move(grid), rank);

    const auto pts = op.grid_->points();
    const auto mi = static_cast<Eigen::Index>(m);
    auto data = std::make_shared<IntegralData>();
    data->kernel.resize(mi, mi);
    for (Eigen::Index j = 0; j < mi; ++j)
        for (Eigen::Index l = 0; l < mi; ++l)
            data->kernel(j, l) = std::exp(-std::abs(pts[static_cast<std::size_t>(j)] - pts[static_cast<std::size_t>(l)]));

    // W^{1/2} K W^{1/2} is symmetric and shares T's eigenvalues.
    const Eigen::VectorXd sw = op.grid_->weight_vector().cwiseSqrt();
    const Eigen::MatrixXd sym = sw.asDiagonal() * data->kernel * sw.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    if (es.info() != Eigen::Success)
        fail(ErrorKind::Numerical, "integral operator eigendecomposition failed (m = " + std::to_string(m) + ")");

    const auto q = static_cast<Eigen::Index>(rank);
    data->values.resize(q);
    data->vectors.resize(mi, q);
    for (Eigen::Index c = 0; c < q; ++c) {
        const Eigen::Index src = mi - 1 - c;
        data->values[c] = es.eigenvalues()[src];
        data->vectors.col(c) = es.eigenvectors().col(src).cwiseQuotient(sw);
    }
    auto s = std::make_shared<Spectrum>();
    s->values = data->values;
    s->vectors = data->vectors;
    op.spectrum_ = std::move(s);
    op.integral_ = std::move(data);
    return op;
}

Eigen::VectorXd OutputOperator::apply(const Eigen::Ref<const Eigen::VectorXd>& a) const
{
    require(static_cast<std::size_t>(a.size()) == size(), ErrorKind::Dimension, "operator: length mismatch");
    switch (kind_) {
    case OperatorKind::Identity: return a;
    case OperatorKind::Multiplication: return diag_.cwiseProduct(a);
    case OperatorKind::Integral: {
        const Eigen::VectorXd wa = grid_->weight_vector().cwiseProduct(a);
        if (rank_ == size())
            return integral_->kernel * wa;
        return integral_->vectors * integral_->values.cwiseProduct(integral_->vectors.transpose() * wa);
    }
    }
    return a;
}

Curve OutputOperator::apply(const Curve& a) const
{
    require(same_grid(a.grid(), grid_), ErrorKind::Dimension, "operator: curve is not on the operator's grid");
    return Curve(grid_, apply(a.values()));
}

Eigen::MatrixXd OutputOperator::apply_rows(const Eigen::MatrixXd& rows) const
{
    require(static_cast<std::size_t>(rows.cols()) == size(), ErrorKind::Dimension, "operator: width mismatch");
    switch (kind_) {
    case OperatorKind::Identity: return rows;
    case OperatorKind::Multiplication: return rows * diag_.asDiagonal();
    case OperatorKind::Integral: {
        const Eigen::MatrixXd wr = rows * grid_->weight_vector().asDiagonal();
        if (rank_ == size())
            return wr * integral_->kernel;  // kernel is symmetric
        return (wr * integral_->vectors) * integral_->values.asDiagonal() * integral_->vectors.transpose();
    }
    }
    return rows;
}

const Spectrum& OutputOperator::spectrum() const { return *spectrum_; }

double OutputOperator::max_eigenvalue() const { return spectrum_->values.size() ? spectrum_->values[0] : 0.0; }

Eigen::VectorXd OutputOperator::shifted_solve(double shift, double scale, const Eigen::Ref<const Eigen::VectorXd>& b) const
{
    require(std::isfinite(shift) && shift > 0.0, ErrorKind::Domain, "shifted solve needs a positive shift");
    require(std::isfinite(scale) && scale >= 0.0, ErrorKind::Domain, "shifted solve needs a non-negative scale");
    require(static_cast<std::size_t>(b.size()) == size(), ErrorKind::Dimension, "shifted solve: length mismatch");
    switch (kind_) {
    case OperatorKind::Identity: return b / (scale + shift);
    case OperatorKind::Multiplication: return (b.array() / (scale * diag_.array() + shift)).matrix();
    case OperatorKind::Integral: {
        // b/c plus the correction on the retained eigenspace.
        const Eigen::VectorXd coeff = integral_->vectors.transpose() * grid_->weight_vector().cwiseProduct(b);
        const Eigen::VectorXd gain =
            ((scale * integral_->values.array() + shift).inverse() - 1.0 / shift).matrix();
        return b / shift + integral_->vectors * gain.cwiseProduct(coeff);
    }
    }
    return b;
}

Curve OutputOperator::shifted_solve(double shift, double scale, const Curve& b) const
{
    require(same_grid(b.grid(), grid_), ErrorKind::Dimension, "shifted solve: curve is not on the operator's grid");
    return Curve(grid_, shifted_solve(shift, scale, b.values()));
}

Eigen::MatrixXd OutputOperator::dense() const
{
    const auto m = static_cast<Eigen::Index>(size());
    switch (kind_) {
    case OperatorKind::Identity: return Eigen::MatrixXd::Identity(m, m);
    case OperatorKind::Multiplication: return diag_.asDiagonal();
    case OperatorKind::Integral:
        if (rank_ == size())
            return integral_->kernel * grid_->weight_vector().asDiagonal();
        return integral_->vectors * integral_->values.asDiagonal() * integral_->vectors.transpose() *
               grid_->weight_vector().asDiagonal();
    }
    return {};
}

std::string OutputOperator::describe() const
{
    if (kind_ == OperatorKind::Integral)
        return "integral(q=" + std::to_string(rank_) + ")";
    return to_string(kind_);
}

bool OutputOperator::operator==(const OutputOperator& other) const noexcept
{
    return kind_ == other.kind_ && rank_ == other.rank_ && same_grid(grid_, other.grid_);
}

Curve op_apply(const OutputOperator& op, const Curve& a) { return op.apply(a); }
const Spectrum& op_spectrum(const OutputOperator& op) { return op.spectrum(); }
Curve op_shifted_solve(const OutputOperator& op, double shift, double scale, const Curve& b)
{
    return op.shifted_solve(shift, scale, b);
}

// ---------------------------------------------------------------- stacks

bool weights_feasible(const Eigen::VectorXd& d, double r, double slack)
{
    if (d.size() == 0 || !d.allFinite() || (d.array() < 0.0).any())
        return false;
    if (std::isinf(r))
        return d.maxCoeff() <= 1.0 + slack;
    return d.array().pow(r).sum() <= 1.0 + slack;
}

KernelStack::KernelStack(std::vector<OvKernelTerm> terms, double norm_exponent)
    : terms_(std::move(terms)), r_(norm_exponent)
{
    require(!terms_.empty(), ErrorKind::Domain, "kernel stack needs at least one term");
    require(r_ >= 1.0, ErrorKind::Domain, "norm exponent r must be >= 1");
    for (std::size_t k = 0; k < terms_.size(); ++k) {
        require(std::isfinite(terms_[k].weight) && terms_[k].weight >= 0.0, ErrorKind::Domain,
                "kernel weight " + std::to_string(k) + " must be >= 0");
        require(same_grid(terms_[k].op.grid(), terms_.front().op.grid()), ErrorKind::Dimension,
                "kernel terms must share one output grid");
    }
    require(weights_feasible(weights(), r_), ErrorKind::Domain, "kernel weights violate the l_r constraint");
}

Eigen::VectorXd KernelStack::weights() const
{
    Eigen::VectorXd d(static_cast<Eigen::Index>(terms_.size()));
    for (std::size_t k = 0; k < terms_.size(); ++k)
        d[static_cast<Eigen::Index>(k)] = terms_[k].weight;
    return d;
}

KernelStack KernelStack::with_weights(const Eigen::VectorXd& d) const
{
    require(static_cast<std::size_t>(d.size()) == terms_.size(), ErrorKind::Dimension, "weight count mismatch");
    auto t = terms_;
    for (std::size_t k = 0; k < t.size(); ++k)
        t[k].weight = d[static_cast<Eigen::Index>(k)];
    return KernelStack(std::move(t), r_);
}

KernelStack KernelStack::with_norm_exponent(double r) const
{
    return KernelStack(terms_, r);
}

KernelStack KernelStack::with_integral_rank(std::size_t rank) const
{
    auto t = terms_;
    std::optional<OutputOperator> shared;
    for (auto& term : t) {
        if (term.op.kind() != OperatorKind::Integral)
            continue;
        if (!shared)
            shared = OutputOperator::integral(term.op.grid(), rank);
        term.op = *shared;
    }
    return KernelStack(std::move(t), r_);
}

bool KernelStack::has_integral() const noexcept
{
    return std::any_of(terms_.begin(), terms_.end(),
                       [](const OvKernelTerm& t) { return t.op.kind() == OperatorKind::Integral; });
}

// ---------------------------------------------------------------- block gram

BlockGram::BlockGram(std::vector<Eigen::MatrixXd> scalar_grams, std::vector<OutputOperator> ops, Eigen::VectorXd weights)
    : ops_(std::move(ops)), weights_(std::move(weights))
{
    require(!scalar_grams.empty(), ErrorKind::Dimension, "block gram needs at least one term");
    require(scalar_grams.size() == ops_.size() && static_cast<std::size_t>(weights_.size()) == ops_.size(),
            ErrorKind::Dimension, "block gram: term count mismatch");
    n_ = static_cast<std::size_t>(scalar_grams.front().rows());
    for (std::size_t k = 0; k < ops_.size(); ++k) {
        require(static_cast<std::size_t>(scalar_grams[k].rows()) == n_ &&
                    static_cast<std::size_t>(scalar_grams[k].cols()) == n_,
                ErrorKind::Dimension, "scalar gram " + std::to_string(k) + " has the wrong shape");
        require(same_grid(ops_[k].grid(), ops_.front().grid()), ErrorKind::Dimension,
                "block gram operators must share one grid");
        require(weights_[static_cast<Eigen::Index>(k)] >= 0.0, ErrorKind::Domain, "negative kernel weight");
    }
    grams_ = std::make_shared<const std::vector<Eigen::MatrixXd>>(std::move(scalar_grams));
}

BlockGram BlockGram::with_weights(const Eigen::VectorXd& d) const
{
    require(static_cast<std::size_t>(d.size()) == ops_.size(), ErrorKind::Dimension, "weight count mismatch");
    require((d.array() >= 0.0).all(), ErrorKind::Domain, "negative kernel weight");
    BlockGram g = *this;
    g.weights_ = d;
    return g;
}

BlockGram BlockGram::subset(std::span<const std::size_t> indices) const
{
    const auto s = static_cast<Eigen::Index>(indices.size());
    std::vector<Eigen::MatrixXd> sub;
    sub.reserve(ops_.size());
    for (const auto& g : *grams_) {
        Eigen::MatrixXd out(s, s);
        for (Eigen::Index a = 0; a < s; ++a) {
            require(indices[static_cast<std::size_t>(a)] < n_, ErrorKind::Dimension, "subset index out of range");
            for (Eigen::Index b = 0; b < s; ++b)
                out(a, b) = g(static_cast<Eigen::Index>(indices[static_cast<std::size_t>(a)]),
                              static_cast<Eigen::Index>(indices[static_cast<std::size_t>(b)]));
        }
        sub.push_back(std::move(out));
    }
    return BlockGram(std::move(sub), ops_, weights_);
}

std::vector<OperatorGroup> BlockGram::groups() const
{
    std::vector<OperatorGroup> out;
    for (std::size_t k = 0; k < ops_.size(); ++k) {
        const double d = weights_[static_cast<Eigen::Index>(k)];
        if (d <= 0.0)
            continue;
        auto it = std::find_if(out.begin(), out.end(), [&](const OperatorGroup& g) { return g.op == ops_[k]; });
        if (it == out.end()) {
            out.push_back(OperatorGroup{ops_[k], d * (*grams_)[k], {k}});
        } else {
            it->gram += d * (*grams_)[k];
            it->members.push_back(k);
        }
    }
    return out;
}

Eigen::MatrixXd BlockGram::apply(const Eigen::MatrixXd& alpha) const
{
    require(static_cast<std::size_t>(alpha.rows()) == n_ && static_cast<std::size_t>(alpha.cols()) == m(),
            ErrorKind::Dimension, "gram apply: alpha has the wrong shape");
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(alpha.rows(), alpha.cols());
    for (const auto& g : groups())
        out.noalias() += g.gram * g.op.apply_rows(alpha);
    return out;
}

Eigen::MatrixXd BlockGram::densify(std::size_t max_dim) const
{
    const std::size_t dim = n_ * m();
    require(dim <= max_dim, ErrorKind::Capacity,
            "densify: n*m = " + std::to_string(dim) + " exceeds the limit " + std::to_string(max_dim));
    const auto mm = static_cast<Eigen::Index>(m());
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t k = 0; k < ops_.size(); ++k) {
        const double d = weights_[static_cast<Eigen::Index>(k)];
        if (d == 0.0)
            continue;
        const Eigen::MatrixXd t = ops_[k].dense();
        const Eigen::MatrixXd& g = (*grams_)[k];
        for (Eigen::Index i = 0; i < g.rows(); ++i)
            for (Eigen::Index j = 0; j < g.cols(); ++j)
                out.block(i * mm, j * mm, mm, mm) += (d * g(i, j)) * t;
    }
    return out;
}

BlockGram assemble_gram(const KernelStack& stack, const CurveVec& inputs)
{
    require(inputs.count() >= 1, ErrorKind::Dimension, "assemble_gram needs at least one input curve");
    std::vector<Eigen::MatrixXd> grams;
    std::vector<OutputOperator> ops;
    grams.reserve(stack.size());
    ops.reserve(stack.size());
    // Terms with identical scalar kernels share one Gram evaluation.
    for (std::size_t k = 0; k < stack.size(); ++k) {
        const auto& term = stack.terms()[k];
        std::optional<std::size_t> seen;
        for (std::size_t p = 0; p < k && !seen; ++p)
            if (stack.terms()[p].scalar == term.scalar)
                seen = p;
        grams.push_back(seen ? grams[*seen] : term.scalar.gram(inputs));
        ops.push_back(term.op);
    }
    return BlockGram(std::move(grams), std::move(ops), stack.weights());
}

CurveVec gram_apply(const BlockGram& g, const CurveVec& alpha)
{
    require(alpha.count() == g.n(), ErrorKind::Dimension, "gram_apply: alpha has the wrong number of curves");
    require(same_grid(alpha.grid(), g.output_grid()), ErrorKind::Dimension, "gram_apply: alpha is not on the output grid");
    return CurveVec(alpha.grid(), g.apply(alpha.rows()));
}

double median_pairwise_distance(const CurveVec& curves)
{
    const Eigen::VectorXd& w = curves.grid()->weight_vector();
    const auto& x = curves.rows();
    std::vector<double> d;
    for (Eigen::Index i = 0; i < x.rows(); ++i)
        for (Eigen::Index j = i + 1; j < x.rows(); ++j)
            d.push_back(std::sqrt((w.array() * (x.row(i) - x.row(j)).transpose().array().square()).sum()));
    if (d.empty())
        return 0.0;
    const auto mid = d.begin() + static_cast<std::ptrdiff_t>(d.size() / 2);
    std::nth_element(d.begin(), mid, d.end());
    if (d.size() % 2 == 1)
        return *mid;
    const double upper = *mid;
    const double lower = *std::max_element(d.begin(), mid);
    return 0.5 * (lower + upper);
}

ScalarKernel unit_diagonal(const ScalarKernel& k, const CurveVec& curves)
{
    require(curves.count() > 0, ErrorKind::Precondition, "unit_diagonal needs at least one curve");
    const ScalarKernel base = k.with_scale(1.0);
    double sum = 0.0;
    for (std::size_t i = 0; i < curves.count(); ++i) {
        const Curve c = curves.curve(i);
        sum += base.eval(c, c);
    }
    const double mean = sum / static_cast<double>(curves.count());
    require(std::isfinite(mean) && mean > 0.0, ErrorKind::Degenerate, "unit_diagonal: kernel diagonal is not positive");
    return base.with_scale(1.0 / mean);
}

KernelStack standard_menu(double scale, const GridPtr& output_grid, std::size_t integral_rank,
                          std::span<const double> bandwidth_factors, double norm_exponent,
                          const CurveVec* calibration)
{
    require(scale > 0.0, ErrorKind::Domain, "menu bandwidth scale must be positive");
    std::vector<ScalarKernel> scalars;
    for (double f : bandwidth_factors)
        scalars.push_back(ScalarKernel::gaussian(f * scale));
    for (int p = 1; p <= 3; ++p)
        scalars.push_back(ScalarKernel::polynomial(p));
    if (calibration)
        for (auto& s : scalars)
            s = unit_diagonal(s, *calibration);
    const std::vector<OutputOperator> ops{OutputOperator::identity(output_grid),
                                          OutputOperator::multiplication(output_grid),
                                          OutputOperator::integral(output_grid, integral_rank)};
    const double d0 = 1.0 / static_cast<double>(scalars.size() * ops.size());
    std::vector<OvKernelTerm> terms;
    for (const auto& op : ops)
        for (const auto& s : scalars)
            terms.push_back(OvKernelTerm{s, op, d0});
    return KernelStack(std::move(terms), norm_exponent);
}

} // namespace movkl
