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

// JSON encodings shared by the model archive and the run configuration.

#include <cstddef>
#include <initializer_list>
#include <string>

#include <Eigen/Dense>
#include <json.hpp>

#include "movkl/funcspace.hpp"
#include "movkl/kernels.hpp"

namespace movkl::io {

nlohmann::json grid_to_json(const Grid& grid);
GridPtr grid_from_json(const nlohmann::json& j);

nlohmann::json scalar_to_json(const ScalarKernel& k);
ScalarKernel scalar_from_json(const nlohmann::json& j);

nlohmann::json operator_to_json(const OutputOperator& op);
OutputOperator operator_from_json(const nlohmann::json& j, const GridPtr& grid);

nlohmann::json rows_to_json(const Eigen::MatrixXd& rows);
Eigen::MatrixXd rows_from_json(const nlohmann::json& j, std::size_t width);

/// r is written as a number, or the string "inf".
nlohmann::json norm_exponent_to_json(double r);
double norm_exponent_from_json(const nlohmann::json& j);

/// Throws a config error naming `where` if `j` has keys outside `allowed`.
void reject_unknown_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed, const std::string& where);

} // namespace movkl::io
