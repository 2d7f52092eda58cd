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

// Run configuration and the subcommands behind the `movkl` tool. Each
// command reads a validated RunConfig and writes its artifacts into
// RunConfig::output_dir.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "movkl/data.hpp"
#include "movkl/errors.hpp"
#include "movkl/eval.hpp"
#include "movkl/kernels.hpp"
#include "movkl/learn.hpp"

namespace movkl::cli {

inline constexpr int kConfigVersion = 1;

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kConfigError = 2,
    kDataError = 3,
    kSolverError = 4,
};

int exit_code_for(ErrorKind kind) noexcept;

/// One configured kernel term. Gaussian bandwidths are either absolute or a
/// multiple of the median pairwise distance between training inputs.
struct KernelSpec {
    ScalarKind scalar = ScalarKind::Gaussian;
    std::optional<double> bandwidth;
    double bandwidth_scale = 1.0;
    int degree = 1;
    double offset = 1.0;
    bool normalize = false;
    bool unit_diagonal = false;  // rescale to unit mean Gram diagonal on the training inputs
    OperatorKind op = OperatorKind::Identity;
    std::size_t rank = 0;
};

struct MenuSpec {
    std::vector<double> bandwidth_factors{0.1, 0.5, 1.0, 5.0, 10.0};
    std::size_t rank = 0;
    bool unit_diagonal = false;
};

/// Seeded random partition; train gets round(fraction * n) samples.
struct SplitSpec {
    double train_fraction = 0.65;
};

struct BenchSpec {
    std::size_t instances = 10;
    std::size_t n_min = 2, n_max = 6;
    std::size_t m_min = 4, m_max = 10;
    std::size_t max_terms = 3;
    double ridge = 0.1;
    bool zero_weights = false;
};

struct RunConfig {
    int version = kConfigVersion;
    std::uint64_t seed = 1;
    std::filesystem::path output_dir = ".";
    std::optional<std::filesystem::path> dataset;
    std::optional<SynthSpec> synth;
    std::string target = "targets";  // or "labels"
    std::vector<KernelSpec> kernels;
    std::optional<MenuSpec> menu;
    FitConfig fit;
    std::optional<SplitSpec> split;
    std::optional<CvSpec> cv;
    double lcr_threshold = 0.5;
    BenchSpec bench;

    /// Parses and schema-checks a JSON document; unknown keys are rejected.
    static RunConfig from_json(const std::string& text);
    static RunConfig from_file(const std::filesystem::path& path);
};

/// Resolves the configured kernels (or menu) against training inputs.
KernelStack build_stack(const RunConfig& cfg, const CurveVec& train_inputs, const GridPtr& output_grid);

/// Loads the configured dataset, or generates it from the synth block.
CurveDataset resolve_dataset(const RunConfig& cfg);

enum class Part { All, Train, Test };

/// The requested part of `ds` under cfg.split (everything when no split is set).
CurveDataset select_part(const RunConfig& cfg, const CurveDataset& ds, Part part);

/// Target curves selected by cfg.target.
CurveVec select_targets(const CurveDataset& ds, const std::string& target);

std::filesystem::path cmd_gen(const RunConfig& cfg);
/// Writes model.json and train_report.json; returns the model path.
std::filesystem::path cmd_train(const RunConfig& cfg);
std::filesystem::path cmd_predict(const RunConfig& cfg, const std::filesystem::path& model_path);
/// Writes metrics.json and metrics.csv; returns the JSON path.
std::filesystem::path cmd_eval(const RunConfig& cfg, const std::filesystem::path& model_path,
                               const std::string& algorithm_name = "");
/// Writes cv_table.csv and cv_selected.json; returns the CSV path.
std::filesystem::path cmd_cv(const RunConfig& cfg);
/// Writes bench.csv; returns its path.
std::filesystem::path cmd_bench(const RunConfig& cfg);

/// Human-readable algorithm label, e.g. "MovKL - l2 norm" or "KRR - integral".
std::string algorithm_label(const MovklModel& model);

std::string train_report_json(const MovklModel& model);

} // namespace movkl::cli
