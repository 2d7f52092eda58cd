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


#include "movkl/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "movkl/draws.hpp"
#include "movkl/linsolve.hpp"
#include "movkl/serialize.hpp"

namespace movkl::cli {

using nlohmann::json;
namespace fs = std::filesystem;

int exit_code_for(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::Config:
    case ErrorKind::Domain:
    case ErrorKind::Precondition: return kConfigError;
    case ErrorKind::Data:
    case ErrorKind::Io:
    case ErrorKind::Dimension: return kDataError;
    case ErrorKind::Numerical:
    case ErrorKind::Convergence:
    case ErrorKind::Degenerate:
    case ErrorKind::Capacity: return kSolverError;
    }
    return kFailure;
}

namespace {

template <class T>
T get_as(const json& j, const char* key, const std::string& where)
{
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        fail(ErrorKind::Config, where + "." + key + " has the wrong type");
    }
}

template <class T>
void read_opt(const json& j, const char* key, T& into, const std::string& where)
{
    if (j.contains(key))
        into = get_as<T>(j, key, where);
}

SynthSpec parse_synth(const json& j, std::uint64_t default_seed)
{
    io::reject_unknown_keys(j, {"n_samples", "grid_size", "latency", "channel_count", "noise_std", "seed", "identity_filter"},
                            "synth");
    SynthSpec s;
    s.seed = default_seed;
    read_opt(j, "n_samples", s.n_samples, "synth");
    read_opt(j, "grid_size", s.grid_size, "synth");
    read_opt(j, "latency", s.latency, "synth");
    read_opt(j, "channel_count", s.channel_count, "synth");
    read_opt(j, "noise_std", s.noise_std, "synth");
    read_opt(j, "seed", s.seed, "synth");
    read_opt(j, "identity_filter", s.identity_filter, "synth");
    s.validate();
    return s;
}

KernelSpec parse_kernel(const json& j, std::size_t idx)
{
    const std::string where = "kernels[" + std::to_string(idx) + "]";
    io::reject_unknown_keys(j, {"scalar", "operator"}, where);
    require(j.contains("scalar") && j.contains("operator"), ErrorKind::Config, where + " needs scalar and operator");
    KernelSpec k;
    const json& s = j.at("scalar");
    io::reject_unknown_keys(s, {"kind", "bandwidth", "bandwidth_scale", "degree", "offset", "normalize", "unit_diagonal"},
                            where + ".scalar");
    const auto kind = get_as<std::string>(s, "kind", where + ".scalar");
    if (kind == "gaussian") {
        k.scalar = ScalarKind::Gaussian;
        if (s.contains("bandwidth")) {
            require(!s.contains("bandwidth_scale"), ErrorKind::Config,
                    where + ": give either bandwidth or bandwidth_scale, not both");
            k.bandwidth = get_as<double>(s, "bandwidth", where);
            require(*k.bandwidth > 0.0, ErrorKind::Config, where + ": bandwidth must be positive");
        }
        read_opt(s, "bandwidth_scale", k.bandwidth_scale, where);
        require(k.bandwidth_scale > 0.0, ErrorKind::Config, where + ": bandwidth_scale must be positive");
        require(!s.contains("degree") && !s.contains("offset"), ErrorKind::Config,
                where + ": degree/offset only apply to polynomial kernels");
    } else if (kind == "polynomial") {
        k.scalar = ScalarKind::Polynomial;
        require(!s.contains("bandwidth") && !s.contains("bandwidth_scale"), ErrorKind::Config,
                where + ": bandwidth only applies to gaussian kernels");
        read_opt(s, "degree", k.degree, where);
        read_opt(s, "offset", k.offset, where);
        require(k.degree >= 1 && k.degree <= 3, ErrorKind::Config, where + ": degree must be 1, 2 or 3");
        require(k.offset >= 0.0, ErrorKind::Config, where + ": offset must be >= 0");
    } else {
        fail(ErrorKind::Config, where + ": unknown scalar kind '" + kind + "'");
    }
    read_opt(s, "normalize", k.normalize, where);
    read_opt(s, "unit_diagonal", k.unit_diagonal, where);

    const json& o = j.at("operator");
    io::reject_unknown_keys(o, {"kind", "rank"}, where + ".operator");
    const auto op = get_as<std::string>(o, "kind", where + ".operator");
    if (op == "identity")
        k.op = OperatorKind::Identity;
    else if (op == "multiplication")
        k.op = OperatorKind::Multiplication;
    else if (op == "integral")
        k.op = OperatorKind::Integral;
    else
        fail(ErrorKind::Config, where + ": unknown operator kind '" + op + "'");
    read_opt(o, "rank", k.rank, where);
    require(o.contains("rank") == false || k.op == OperatorKind::Integral, ErrorKind::Config,
            where + ": rank only applies to the integral operator");
    return k;
}

std::vector<double> positive_list(const json& j, const char* key, const std::string& where)
{
    auto v = get_as<std::vector<double>>(j, key, where);
    require(!v.empty(), ErrorKind::Config, where + "." + key + " must not be empty");
    for (double x : v)
        require(std::isfinite(x) && x > 0.0, ErrorKind::Config, where + "." + key + " entries must be positive");
    return v;
}

void write_text(const fs::path& path, const std::string& text)
{
    if (path.has_parent_path())
        fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    require(static_cast<bool>(out), ErrorKind::Io, "cannot write " + path.string());
    out << text;
    require(static_cast<bool>(out), ErrorKind::Io, "write failed for " + path.string());
}

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_short(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

OutputOperator make_operator(OperatorKind kind, const GridPtr& grid, std::size_t rank)
{
    switch (kind) {
    case OperatorKind::Identity: return OutputOperator::identity(grid);
    case OperatorKind::Multiplication: return OutputOperator::multiplication(grid);
    case OperatorKind::Integral: return OutputOperator::integral(grid, rank);
    }
    fail(ErrorKind::Config, "unknown operator kind");
}

} // namespace

RunConfig RunConfig::from_json(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(ErrorKind::Config, std::string("config is not valid JSON: ") + e.what());
    }
    io::reject_unknown_keys(j, {"version", "seed", "output_dir", "dataset", "synth", "split", "target", "kernels", "menu",
                                "r", "lambda", "fit", "solver", "cv", "lcr_threshold", "bench"},
                            "config");
    RunConfig c;
    read_opt(j, "version", c.version, "config");
    require(c.version == kConfigVersion, ErrorKind::Config,
            "unsupported config version " + std::to_string(c.version));
    read_opt(j, "seed", c.seed, "config");
    if (j.contains("output_dir"))
        c.output_dir = get_as<std::string>(j, "output_dir", "config");
    if (j.contains("dataset"))
        c.dataset = get_as<std::string>(j, "dataset", "config");
    if (j.contains("synth"))
        c.synth = parse_synth(j.at("synth"), c.seed);
    if (j.contains("split")) {
        const json& s = j.at("split");
        io::reject_unknown_keys(s, {"train_fraction"}, "split");
        SplitSpec sp;
        read_opt(s, "train_fraction", sp.train_fraction, "split");
        require(sp.train_fraction > 0.0 && sp.train_fraction < 1.0, ErrorKind::Config,
                "split.train_fraction must lie in (0, 1)");
        c.split = sp;
    }
    read_opt(j, "target", c.target, "config");
    require(c.target == "targets" || c.target == "labels", ErrorKind::Config, "target must be \"targets\" or \"labels\"");

    if (j.contains("kernels")) {
        const json& ks = j.at("kernels");
        require(ks.is_array() && !ks.empty(), ErrorKind::Config, "kernels must be a non-empty array");
        for (std::size_t i = 0; i < ks.size(); ++i)
            c.kernels.push_back(parse_kernel(ks[i], i));
    }
    if (j.contains("menu")) {
        const json& m = j.at("menu");
        io::reject_unknown_keys(m, {"bandwidth_factors", "rank", "unit_diagonal"}, "menu");
        MenuSpec ms;
        if (m.contains("bandwidth_factors"))
            ms.bandwidth_factors = positive_list(m, "bandwidth_factors", "menu");
        read_opt(m, "rank", ms.rank, "menu");
        read_opt(m, "unit_diagonal", ms.unit_diagonal, "menu");
        c.menu = ms;
    }
    require(!(c.menu && !c.kernels.empty()), ErrorKind::Config, "give either kernels or menu, not both");

    if (j.contains("r"))
        c.fit.r = io::norm_exponent_from_json(j.at("r"));
    read_opt(j, "lambda", c.fit.lambda, "config");
    if (j.contains("fit")) {
        const json& f = j.at("fit");
        io::reject_unknown_keys(f, {"mkl_tol", "mkl_max_iter"}, "fit");
        read_opt(f, "mkl_tol", c.fit.mkl_tol, "fit");
        read_opt(f, "mkl_max_iter", c.fit.mkl_max_iter, "fit");
    }
    if (j.contains("solver")) {
        const json& s = j.at("solver");
        io::reject_unknown_keys(s, {"outer_tol", "outer_max_iter", "inner_tol", "inner_max_iter"}, "solver");
        read_opt(s, "outer_tol", c.fit.solve.outer_tol, "solver");
        read_opt(s, "outer_max_iter", c.fit.solve.outer_max_iter, "solver");
        read_opt(s, "inner_tol", c.fit.solve.inner_tol, "solver");
        read_opt(s, "inner_max_iter", c.fit.solve.inner_max_iter, "solver");
    }
    try {
        c.fit.validate();
    } catch (const Error& e) {
        fail(ErrorKind::Config, e.what());
    }
    if (j.contains("cv")) {
        const json& v = j.at("cv");
        io::reject_unknown_keys(v, {"lambda_grid", "rank_grid"}, "cv");
        CvSpec cv;
        cv.lambda_grid = positive_list(v, "lambda_grid", "cv");
        if (v.contains("rank_grid")) {
            cv.rank_grid = get_as<std::vector<std::size_t>>(v, "rank_grid", "cv");
            for (auto q : cv.rank_grid)
                require(q >= 1, ErrorKind::Config, "cv.rank_grid entries must be >= 1");
        }
        c.cv = cv;
    }
    read_opt(j, "lcr_threshold", c.lcr_threshold, "config");
    require(std::isfinite(c.lcr_threshold), ErrorKind::Config, "lcr_threshold must be finite");
    if (j.contains("bench")) {
        const json& b = j.at("bench");
        io::reject_unknown_keys(b, {"instances", "n_min", "n_max", "m_min", "m_max", "max_terms", "ridge", "zero_weights"},
                                "bench");
        auto& s = c.bench;
        read_opt(b, "instances", s.instances, "bench");
        read_opt(b, "n_min", s.n_min, "bench");
        read_opt(b, "n_max", s.n_max, "bench");
        read_opt(b, "m_min", s.m_min, "bench");
        read_opt(b, "m_max", s.m_max, "bench");
        read_opt(b, "max_terms", s.max_terms, "bench");
        read_opt(b, "ridge", s.ridge, "bench");
        read_opt(b, "zero_weights", s.zero_weights, "bench");
        require(s.n_min >= 1 && s.n_min <= s.n_max, ErrorKind::Config, "bench: need 1 <= n_min <= n_max");
        require(s.m_min >= 2 && s.m_min <= s.m_max, ErrorKind::Config, "bench: need 2 <= m_min <= m_max");
        require(s.max_terms >= 1, ErrorKind::Config, "bench: max_terms must be >= 1");
        require(s.ridge > 0.0, ErrorKind::Config, "bench: ridge must be positive");
    }
    return c;
}

RunConfig RunConfig::from_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), ErrorKind::Config, "cannot read config " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

CurveDataset resolve_dataset(const RunConfig& cfg)
{
    if (cfg.dataset)
        return load_dataset(*cfg.dataset);
    require(cfg.synth.has_value(), ErrorKind::Config, "config needs a dataset path or a synth block");
    return generate_synthetic(*cfg.synth);
}

CurveDataset select_part(const RunConfig& cfg, const CurveDataset& ds, Part part)
{
    if (!cfg.split || part == Part::All)
        return ds;
    const std::size_t n = ds.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    // Fisher-Yates with the portable generator so splits match across platforms.
    detail::Draws rng(cfg.seed);
    for (std::size_t i = n; i > 1; --i)
        std::swap(order[i - 1], order[rng.index(0, i - 1)]);
    const auto n_train = static_cast<std::size_t>(std::llround(cfg.split->train_fraction * static_cast<double>(n)));
    require(n_train >= 1 && n_train < n, ErrorKind::Data, "split leaves an empty train or test part");
    std::vector<std::size_t> idx = part == Part::Train ? std::vector<std::size_t>(order.begin(), order.begin() + n_train)
                                                       : std::vector<std::size_t>(order.begin() + n_train, order.end());
    std::sort(idx.begin(), idx.end());
    return ds.select(idx);
}

CurveVec select_targets(const CurveDataset& ds, const std::string& target)
{
    if (target == "targets")
        return ds.targets;
    require(target == "labels", ErrorKind::Config, "unknown target '" + target + "'");
    require(ds.labels.has_value(), ErrorKind::Data, "dataset has no label curves");
    return *ds.labels;
}

KernelStack build_stack(const RunConfig& cfg, const CurveVec& train_inputs, const GridPtr& output_grid)
{
    const double r = cfg.fit.r;
    if (cfg.menu) {
        const double med = median_pairwise_distance(train_inputs);
        require(med > 0.0, ErrorKind::Data, "training inputs are all identical; no bandwidth scale");
        return standard_menu(med, output_grid, cfg.menu->rank, cfg.menu->bandwidth_factors, r,
                             cfg.menu->unit_diagonal ? &train_inputs : nullptr);
    }
    require(!cfg.kernels.empty(), ErrorKind::Config, "config lists no kernels and no menu");
    std::optional<double> med;
    std::vector<OvKernelTerm> terms;
    const double d0 = 1.0 / static_cast<double>(cfg.kernels.size());
    for (const auto& k : cfg.kernels) {
        ScalarKernel s = ScalarKernel::gaussian(1.0);
        if (k.scalar == ScalarKind::Gaussian) {
            double bw = 0.0;
            if (k.bandwidth) {
                bw = *k.bandwidth;
            } else {
                if (!med)
                    med = median_pairwise_distance(train_inputs);
                require(*med > 0.0, ErrorKind::Data, "training inputs are all identical; no bandwidth scale");
                bw = k.bandwidth_scale * *med;
            }
            s = ScalarKernel::gaussian(bw, k.normalize);
        } else {
            s = ScalarKernel::polynomial(k.degree, k.offset, k.normalize);
        }
        if (k.unit_diagonal)
            s = unit_diagonal(s, train_inputs);
        terms.push_back(OvKernelTerm{s, make_operator(k.op, output_grid, k.rank), d0});
    }
    return KernelStack(std::move(terms), r);
}

std::string algorithm_label(const MovklModel& model)
{
    if (model.stack.size() == 1) {
        switch (model.stack.terms().front().op.kind()) {
        case OperatorKind::Identity: return "KRR - scalar-valued";
        case OperatorKind::Integral: return "KRR - functional response";
        case OperatorKind::Multiplication: return "KRR - multiplication operator";
        }
    }
    if (std::isinf(model.r))
        return "MovKL - linf norm";
    return "MovKL - l" + fmt_short(model.r) + " norm";
}

std::string train_report_json(const MovklModel& model)
{
    json terms = json::array();
    for (std::size_t k = 0; k < model.stack.size(); ++k) {
        const auto& t = model.stack.terms()[k];
        terms.push_back({{"scalar", t.scalar.describe()}, {"operator", t.op.describe()}, {"weight", model.weights[static_cast<Eigen::Index>(k)]}});
    }
    json j = {
        {"algorithm", algorithm_label(model)},
        {"target", model.target},
        {"n", model.alpha.count()},
        {"m", model.output_grid()->size()},
        {"lambda", model.lambda},
        {"r", io::norm_exponent_to_json(model.r)},
        {"terms", terms},
        {"weights", std::vector<double>(model.weights.data(), model.weights.data() + model.weights.size())},
        {"objective_trace", model.objective_trace},
        {"solver_iterations", model.solver_iterations},
        {"mkl_iterations", model.mkl_iterations},
        {"mkl_converged", model.mkl_converged},
    };
    return j.dump(1) + "\n";
}

fs::path cmd_gen(const RunConfig& cfg)
{
    require(cfg.synth.has_value(), ErrorKind::Config, "gen needs a synth block");
    const CurveDataset ds = generate_synthetic(*cfg.synth);
    const fs::path out = cfg.output_dir / "dataset.txt";
    fs::create_directories(cfg.output_dir);
    save_dataset(out, ds);
    return out;
}

fs::path cmd_train(const RunConfig& cfg)
{
    const CurveDataset ds = select_part(cfg, resolve_dataset(cfg), Part::Train);
    const CurveVec y = select_targets(ds, cfg.target);
    const KernelStack stack = build_stack(cfg, ds.inputs, ds.output_grid());
    MovklModel model = movkl_fit(stack, ds.inputs, y, cfg.fit);
    model.target = cfg.target;
    fs::create_directories(cfg.output_dir);
    const fs::path path = cfg.output_dir / "model.json";
    save_model(path, model);
    write_text(cfg.output_dir / "train_report.json", train_report_json(model));
    return path;
}

fs::path cmd_predict(const RunConfig& cfg, const fs::path& model_path)
{
    const MovklModel model = load_model(model_path);
    const CurveDataset ds = select_part(cfg, resolve_dataset(cfg), Part::Test);
    require(*ds.input_grid() == *model.input_grid(), ErrorKind::Data, "dataset input grid differs from the model's");
    const CurveVec pred = predict(model, ds.inputs);
    std::string text = "t";
    for (double t : model.output_grid()->points())
        text += "," + fmt(t);
    text += "\n";
    for (std::size_t i = 0; i < pred.count(); ++i) {
        text += std::to_string(i);
        for (Eigen::Index j = 0; j < pred.rows().cols(); ++j)
            text += "," + fmt(pred.rows()(static_cast<Eigen::Index>(i), j));
        text += "\n";
    }
    const fs::path out = cfg.output_dir / "predictions.csv";
    write_text(out, text);
    return out;
}

fs::path cmd_eval(const RunConfig& cfg, const fs::path& model_path, const std::string& algorithm_name)
{
    const MovklModel model = load_model(model_path);
    const CurveDataset ds = select_part(cfg, resolve_dataset(cfg), Part::Test);
    require(ds.size() > 0, ErrorKind::Config, "evaluation dataset is empty");
    require(*ds.input_grid() == *model.input_grid(), ErrorKind::Data, "dataset input grid differs from the model's");
    require(*ds.output_grid() == *model.output_grid(), ErrorKind::Data, "dataset output grid differs from the model's");
    const CurveVec truth = select_targets(ds, model.target);
    const CurveVec pred = predict(model, ds.inputs);
    const double err = rsse(truth, pred);
    std::optional<double> rate;
    if (model.target == "labels")
        rate = lcr(truth, pred, cfg.lcr_threshold);

    const std::string name = algorithm_name.empty() ? algorithm_label(model) : algorithm_name;
    json j = {{"algorithm", name}, {"target", model.target}, {"n", ds.size()}, {"rsse", err},
              {"lcr", rate ? json(*rate) : json(nullptr)}, {"lcr_threshold", cfg.lcr_threshold}};
    fs::create_directories(cfg.output_dir);
    const fs::path out = cfg.output_dir / "metrics.json";
    write_text(out, j.dump(1) + "\n");

    // The CSV accumulates one row per evaluated model, like a results table.
    const fs::path csv = cfg.output_dir / "metrics.csv";
    const bool fresh = !fs::exists(csv);
    std::ofstream table(csv, std::ios::binary | std::ios::app);
    require(static_cast<bool>(table), ErrorKind::Io, "cannot write " + csv.string());
    if (fresh)
        table << "Algorithm,RSSE,LCR\n";
    table << name << "," << fmt(err) << "," << (rate ? fmt(*rate) : std::string("NA")) << "\n";
    return out;
}

fs::path cmd_cv(const RunConfig& cfg)
{
    require(cfg.cv.has_value(), ErrorKind::Config, "cv needs a cv block with lambda_grid");
    const CurveDataset ds = select_part(cfg, resolve_dataset(cfg), Part::Train);
    const CurveVec y = select_targets(ds, cfg.target);
    const KernelStack stack = build_stack(cfg, ds.inputs, ds.output_grid());
    const CvResult res = loo_cv(stack, ds.inputs, y, *cfg.cv, cfg.fit);
    fs::create_directories(cfg.output_dir);
    const fs::path out = cfg.output_dir / "cv_table.csv";
    write_text(out, cv_table_csv(res));
    json sel = {{"lambda", res.best_lambda}, {"rank", res.best_rank}, {"cv_rsse", res.best_rsse}};
    write_text(cfg.output_dir / "cv_selected.json", sel.dump(1) + "\n");
    return out;
}

namespace {

struct BenchRow {
    std::size_t instance, n, m, terms;
    std::string kase, solver;
    int iterations;
    double residual, rel_error;
    bool converged;
    double wall_ms;
};

} // namespace

fs::path cmd_bench(const RunConfig& cfg)
{
    using clock = std::chrono::steady_clock;
    const BenchSpec& b = cfg.bench;
    detail::Draws rng(cfg.seed);
    std::vector<BenchRow> rows;
    for (std::size_t inst = 0; inst < b.instances; ++inst) {
        const std::size_t n = rng.index(b.n_min, b.n_max);
        const std::size_t m = rng.index(b.m_min, b.m_max);
        const std::size_t nt = rng.index(1, b.max_terms);
        const GridPtr in_grid = Grid::uniform(0.0, 1.0, 8);
        const GridPtr out_grid = Grid::uniform(0.0, 1.0, m);
        Eigen::MatrixXd xr(static_cast<Eigen::Index>(n), 8);
        Eigen::MatrixXd yr(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
        for (Eigen::Index i = 0; i < xr.size(); ++i)
            xr.data()[i] = rng.normal();
        for (Eigen::Index i = 0; i < yr.size(); ++i)
            yr.data()[i] = rng.normal();
        const CurveVec x(in_grid, xr);
        const CurveVec y(out_grid, yr);

        // Case 1: every term shares one operator; case 2 mixes operators.
        const bool shared = rng.uniform() < 0.5;
        const auto first_kind = static_cast<OperatorKind>(rng.index(0, 2));
        std::vector<Eigen::MatrixXd> grams;
        std::vector<OutputOperator> ops;
        Eigen::VectorXd d(static_cast<Eigen::Index>(nt));
        for (std::size_t k = 0; k < nt; ++k) {
            const auto kind = shared ? first_kind : static_cast<OperatorKind>(rng.index(0, 2));
            ops.push_back(make_operator(kind, out_grid, 0));
            const ScalarKernel s = rng.uniform() < 0.5 ? ScalarKernel::gaussian(rng.uniform(0.5, 3.0))
                                                       : ScalarKernel::polynomial(static_cast<int>(rng.index(1, 3)));
            grams.push_back(s.gram(x));
            d[static_cast<Eigen::Index>(k)] = b.zero_weights ? 0.0 : rng.uniform(0.1, 1.0);
        }
        const BlockGram g(std::move(grams), ops, d);
        const std::string kase = b.zero_weights ? "zero-weights" : (single_operator(g) ? "single-operator" : "multi-operator");

        const auto t0 = clock::now();
        const auto [ref, ref_rep] = dense_solve(g, b.ridge, y);
        const double dense_ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
        const Eigen::VectorXd& w = out_grid->weight_vector();
        auto rel = [&](const CurveVec& a) {
            const Eigen::MatrixXd diff = a.rows() - ref.rows();
            return std::sqrt(detail::weighted_frobenius(w, diff, diff)) /
                   std::max(1e-300, std::sqrt(detail::weighted_frobenius(w, ref.rows(), ref.rows())));
        };
        rows.push_back({inst, n, m, nt, kase, "dense", ref_rep.iterations, ref_rep.final_residual, 0.0, ref_rep.converged, dense_ms});
        if (single_operator(g)) {
            const auto t1 = clock::now();
            const auto [sol, rep] = kron_solve(g, b.ridge, y);
            const double ms = std::chrono::duration<double, std::milli>(clock::now() - t1).count();
            rows.push_back({inst, n, m, nt, kase, "kron", rep.iterations, rep.final_residual, rel(sol), rep.converged, ms});
        }
        const auto t2 = clock::now();
        const auto [sol, rep] = gauss_seidel_solve(g, b.ridge, y, cfg.fit.solve);
        const double ms = std::chrono::duration<double, std::milli>(clock::now() - t2).count();
        rows.push_back({inst, n, m, nt, kase, "gauss-seidel", rep.iterations, rep.final_residual, rel(sol), rep.converged, ms});
    }

    std::string text = "instance,case,n,m,terms,solver,iterations,residual,rel_error_vs_dense,converged,wall_ms\n";
    for (const auto& r : rows) {
        text += std::to_string(r.instance) + "," + r.kase + "," + std::to_string(r.n) + "," + std::to_string(r.m) + "," +
                std::to_string(r.terms) + "," + r.solver + "," + std::to_string(r.iterations) + "," + fmt(r.residual) +
                "," + fmt(r.rel_error) + "," + (r.converged ? "1" : "0") + "," + fmt_short(r.wall_ms) + "\n";
    }
    fs::create_directories(cfg.output_dir);
    const fs::path out = cfg.output_dir / "bench.csv";
    write_text(out, text);
    return out;
}

} // namespace movkl::cli
