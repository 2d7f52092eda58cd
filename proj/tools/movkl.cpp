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


// movkl command-line tool: gen, train, predict, eval, cv, bench.

#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "movkl/cli.hpp"
#include "movkl/serialize.hpp"

namespace {

struct Overrides {
    std::string config;
    std::string dataset;
    std::string model;
    std::string out;
    std::string target;
    std::string name;
    std::string r;
    std::optional<std::uint64_t> seed;
    std::optional<double> lambda;
    std::optional<double> threshold;
};

movkl::cli::RunConfig load(const Overrides& o)
{
    using movkl::cli::RunConfig;
    RunConfig cfg = o.config.empty() ? RunConfig::from_json("{}") : RunConfig::from_file(o.config);
    if (o.seed) {
        cfg.seed = *o.seed;
        if (cfg.synth)
            cfg.synth->seed = *o.seed;
    }
    if (!o.dataset.empty())
        cfg.dataset = o.dataset;
    if (!o.out.empty())
        cfg.output_dir = o.out;
    if (!o.target.empty()) {
        movkl::require(o.target == "targets" || o.target == "labels", movkl::ErrorKind::Config,
                       "--target must be targets or labels");
        cfg.target = o.target;
    }
    if (o.lambda) {
        movkl::require(*o.lambda > 0.0, movkl::ErrorKind::Config, "--lambda must be positive");
        cfg.fit.lambda = *o.lambda;
    }
    if (!o.r.empty()) {
        nlohmann::json j = o.r == "inf" ? nlohmann::json("inf") : nlohmann::json(std::stod(o.r));
        cfg.fit.r = movkl::io::norm_exponent_from_json(j);
    }
    if (o.threshold)
        cfg.lcr_threshold = *o.threshold;
    return cfg;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Multiple operator-valued kernel learning for curve-to-curve regression"};
    app.require_subcommand(1);
    Overrides o;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config, "JSON run configuration")->check(CLI::ExistingFile);
        sub->add_option("--dataset", o.dataset, "dataset file (overrides the config)");
        sub->add_option("--out", o.out, "output directory");
        sub->add_option("--seed", o.seed, "random seed");
    };
    auto* gen = app.add_subcommand("gen", "generate a synthetic latency dataset");
    common(gen);
    auto* train = app.add_subcommand("train", "fit a model");
    common(train);
    train->add_option("--lambda", o.lambda, "ridge parameter");
    train->add_option("--r", o.r, "norm exponent (>= 1 or inf)");
    train->add_option("--target", o.target, "targets or labels");
    auto* pred = app.add_subcommand("predict", "predict curves for a dataset");
    common(pred);
    pred->add_option("--model", o.model, "model archive")->required();
    auto* eval = app.add_subcommand("eval", "RSSE and LCR of a model on a dataset");
    common(eval);
    eval->add_option("--model", o.model, "model archive")->required();
    eval->add_option("--threshold", o.threshold, "label threshold for LCR");
    eval->add_option("--name", o.name, "algorithm name in the metrics table");
    auto* cv = app.add_subcommand("cv", "one-curve-leave-out cross-validation");
    common(cv);
    cv->add_option("--r", o.r, "norm exponent (>= 1 or inf)");
    cv->add_option("--target", o.target, "targets or labels");
    auto* bench = app.add_subcommand("bench", "compare solvers on random instances");
    common(bench);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : movkl::cli::kConfigError;
    }

    try {
        const auto cfg = load(o);
        std::filesystem::path out;
        if (gen->parsed())
            out = movkl::cli::cmd_gen(cfg);
        else if (train->parsed())
            out = movkl::cli::cmd_train(cfg);
        else if (pred->parsed())
            out = movkl::cli::cmd_predict(cfg, o.model);
        else if (eval->parsed())
            out = movkl::cli::cmd_eval(cfg, o.model, o.name);
        else if (cv->parsed())
            out = movkl::cli::cmd_cv(cfg);
        else
            out = movkl::cli::cmd_bench(cfg);
        std::cout << out.string() << "\n";
        return movkl::cli::kOk;
    } catch (const movkl::Error& e) {
        std::cerr << "movkl: " << movkl::to_string(e.kind()) << ": " << e.what() << "\n";
        return movkl::cli::exit_code_for(e.kind());
    } catch (const std::invalid_argument& e) {
        std::cerr << "movkl: bad argument: " << e.what() << "\n";
        return movkl::cli::kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "movkl: " << e.what() << "\n";
        return movkl::cli::kFailure;
    }
}
