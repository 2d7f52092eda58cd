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

// Curve datasets: the line-oriented text format, a plain feature-CSV
// importer, and the synthetic latency-task generator.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "movkl/funcspace.hpp"

namespace movkl {

struct CurveDataset {
    CurveVec inputs;
    CurveVec targets;
    std::optional<CurveVec> labels;  // 0/1 step curves on the output grid
    std::size_t channels = 1;

    std::size_t size() const noexcept { return inputs.count(); }
    const GridPtr& input_grid() const noexcept { return inputs.grid(); }
    const GridPtr& output_grid() const noexcept { return targets.grid(); }

    /// Enforces equal counts, shared output grid and 0/1 labels.
    void validate() const;
    /// Samples at the given indices.
    CurveDataset select(std::span<const std::size_t> indices) const;
};

inline constexpr int kDatasetFormatVersion = 1;

/// Writes the text format:
///
///   movkl-dataset,1
///   n,<n>,m_in,<m_in>,m_out,<m_out>,labels,<0|1>,channels,<c>
///   input_points,...     input_weights,...
///   output_points,...    output_weights,...
///   x,<i>,...            one record per sample and field,
///   y,<i>,...            labels as `l,<i>,...` when present
///
/// Values use 17 significant digits, so save/load round-trips bit-exactly.
void save_dataset(const std::filesystem::path& path, const CurveDataset& ds);
std::string dataset_to_text(const CurveDataset& ds);
CurveDataset load_dataset(const std::filesystem::path& path);
CurveDataset dataset_from_text(const std::string& text);

/// Imports pre-extracted features from a headerless CSV, one sample per row:
/// channels*m_in input values, then m_out targets, then (optionally) m_out
/// 0/1 labels. Grids are uniform on [0, 1], channels stacked.
CurveDataset import_feature_csv(const std::filesystem::path& path, std::size_t channels, std::size_t m_in,
                                std::size_t m_out, bool has_labels);

struct SynthSpec {
    std::size_t n_samples = 100;
    std::size_t grid_size = 200;
    std::size_t latency = 15;  // in grid steps
    std::size_t channel_count = 1;
    double noise_std = 0.1;
    std::uint64_t seed = 1;
    bool identity_filter = false;  // unit gain, no smoothing in every channel

    void validate() const;
};

/// Random rectified sums of low-frequency sinusoids a_i(t) on [0, 1].
/// targets = a_i, labels = [a_i > 0.1 max a_i], and channel c of the input is
/// g_c (h_c * a_i)(t - latency dt) plus white noise, where h_c is a short
/// symmetric smoothing filter. Deterministic in the seed.
CurveDataset generate_synthetic(const SynthSpec& spec);

} // namespace movkl
