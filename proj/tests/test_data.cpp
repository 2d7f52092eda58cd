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


#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include "movkl/data.hpp"
#include "movkl/errors.hpp"
#include "oracles.hpp"

using namespace movkl;

namespace {

CurveDataset small_set(bool labels)
{
    detail::Draws rng(41);
    const auto gin = Grid::uniform(-1.0, 2.0, 5);
    const auto go = Grid::uniform(0.0, 1.0, 4);
    CurveDataset ds{oracle::random_curves(rng, gin, 3), oracle::random_curves(rng, go, 3), std::nullopt, 1};
    if (labels) {
        Eigen::MatrixXd l(3, 4);
        l << 0, 1, 1, 0, 1, 1, 1, 1, 0, 0, 0, 0;
        ds.labels = CurveVec(go, l);
    }
    // Values that stress shortest round-trip formatting.
    Eigen::MatrixXd x = ds.inputs.rows();
    x(0, 0) = 0.1;
    x(0, 1) = 1.0 / 3.0;
    x(1, 2) = -1e-300;
    x(2, 4) = 123456789.123456789;
    ds.inputs = CurveVec(gin, x);
    return ds;
}

} // namespace

TEST_CASE("dataset text round-trips bit-exactly")
{
    for (bool labels : {false, true}) {
        const CurveDataset ds = small_set(labels);
        const std::string text = dataset_to_text(ds);
        const CurveDataset back = dataset_from_text(text);
        CHECK(back.inputs.rows() == ds.inputs.rows());
        CHECK(back.targets.rows() == ds.targets.rows());
        CHECK(back.labels.has_value() == labels);
        if (labels)
            CHECK(back.labels->rows() == ds.labels->rows());
        CHECK(std::vector<double>(back.input_grid()->points().begin(), back.input_grid()->points().end()) ==
              std::vector<double>(ds.input_grid()->points().begin(), ds.input_grid()->points().end()));
        CHECK(std::vector<double>(back.output_grid()->weights().begin(), back.output_grid()->weights().end()) ==
              std::vector<double>(ds.output_grid()->weights().begin(), ds.output_grid()->weights().end()));
        CHECK(dataset_to_text(back) == text);
    }
    const auto path = std::filesystem::temp_directory_path() / "movkl_test_dataset.txt";
    save_dataset(path, small_set(true));
    CHECK(dataset_to_text(load_dataset(path)) == dataset_to_text(small_set(true)));
    std::filesystem::remove(path);
}

TEST_CASE("malformed datasets are rejected with context")
{
    const std::string text = dataset_to_text(small_set(false));
    auto error_of = [](const std::string& t) -> std::pair<ErrorKind, std::string> {
        try {
            (void)dataset_from_text(t);
        } catch (const Error& e) {
            return {e.kind(), e.what()};
        }
        return {ErrorKind::Config, "no error"};
    };
    // Corrupt the second value of the x record of sample 1.
    const auto pos = text.find("\nx,1,");
    REQUIRE(pos != std::string::npos);
    const auto start = text.find(',', pos + 5) + 1;
    const auto stop = text.find(',', start);
    std::string bad = text;
    bad.replace(start, stop - start, "nan");
    const auto [kind, what] = error_of(bad);
    CHECK(kind == ErrorKind::Data);
    CHECK(what.find("x[1]") != std::string::npos);

    CHECK(error_of("").first == ErrorKind::Data);
    CHECK(error_of("movkl-dataset,99\n").first == ErrorKind::Data);
    CHECK(error_of(text.substr(0, text.size() / 2)).first == ErrorKind::Data);
    CHECK_THROWS_AS(load_dataset("/nonexistent/movkl/data.txt"), Error);
}

TEST_CASE("feature csv import")
{
    const auto path = std::filesystem::temp_directory_path() / "movkl_test_features.csv";
    {
        std::ofstream out(path);
        out << "1,2,3,4,0.5,0.25,0,1\n5,6,7,8,1.5,2.5,1,1\n";
    }
    const CurveDataset ds = import_feature_csv(path, 2, 2, 2, true);
    CHECK(ds.size() == 2);
    CHECK(ds.channels == 2);
    CHECK(ds.inputs.samples() == 4);
    CHECK(ds.targets.rows()(1, 1) == 2.5);
    CHECK(ds.labels->rows()(0, 1) == 1.0);
    CHECK_THROWS_AS(import_feature_csv(path, 2, 2, 3, true), Error);
    std::filesystem::remove(path);
}

TEST_CASE("synthetic generator")
{
    SynthSpec spec;
    spec.n_samples = 6;
    spec.grid_size = 50;
    spec.latency = 0;
    spec.noise_std = 0.0;
    spec.identity_filter = true;
    spec.seed = 7;
    const CurveDataset plain = generate_synthetic(spec);
    CHECK(plain.inputs.rows() == plain.targets.rows());
    CHECK((plain.targets.rows().array() >= 0.0).all());
    for (Eigen::Index i = 0; i < 6; ++i) {
        const double peak = plain.targets.rows().row(i).maxCoeff();
        for (Eigen::Index j = 0; j < 50; ++j)
            CHECK(plain.labels->rows()(i, j) == (plain.targets.rows()(i, j) > 0.1 * peak ? 1.0 : 0.0));
    }

    spec = SynthSpec{};
    spec.n_samples = 8;
    spec.channel_count = 3;
    spec.seed = 99;
    const CurveDataset a = generate_synthetic(spec), b = generate_synthetic(spec);
    CHECK(dataset_to_text(a) == dataset_to_text(b));
    CHECK(a.inputs.samples() == 600);
    spec.seed = 100;
    CHECK(generate_synthetic(spec).inputs.rows() != a.inputs.rows());

    spec.latency = 400;
    CHECK_THROWS_AS(generate_synthetic(spec), Error);
}

TEST_CASE("inputs lag the targets by the configured latency")
{
    for (double noise : {0.0, 0.1}) {
        SynthSpec spec;
        spec.n_samples = 40;
        spec.grid_size = 200;
        spec.latency = 10;
        spec.noise_std = noise;
        spec.seed = 5;
        const CurveDataset ds = generate_synthetic(spec);
        // Cross-correlation of centred curves, summed over samples, peaks at the latency.
        int best_lag = -1;
        double best = -1e300;
        for (int lag = 0; lag <= 30; ++lag) {
            double acc = 0.0;
            for (Eigen::Index i = 0; i < 40; ++i) {
                const Eigen::RowVectorXd x = ds.inputs.rows().row(i).array() - ds.inputs.rows().row(i).mean();
                const Eigen::RowVectorXd y = ds.targets.rows().row(i).array() - ds.targets.rows().row(i).mean();
                double c = 0.0;
                for (Eigen::Index j = 0; j + lag < 200; ++j)
                    c += y(j) * x(j + lag);
                acc += c / static_cast<double>(200 - lag);
            }
            if (acc > best) {
                best = acc;
                best_lag = lag;
            }
        }
        CHECK(best_lag == 10);
    }
}
