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

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "movkl/learn.hpp"
#include "movkl/serialize.hpp"

namespace movkl {

using nlohmann::json;

std::string model_to_json(const MovklModel& model)
{
    json j;
    j["format"] = "movkl-model";
    j["version"] = kModelFormatVersion;
    j["target"] = model.target;
    j["lambda"] = model.lambda;
    j["r"] = io::norm_exponent_to_json(model.r);
    j["input_grid"] = io::grid_to_json(*model.input_grid());
    j["output_grid"] = io::grid_to_json(*model.output_grid());
    json terms = json::array();
    for (const auto& t : model.stack.terms())
        terms.push_back({{"scalar", io::scalar_to_json(t.scalar)}, {"operator", io::operator_to_json(t.op)}, {"weight", t.weight}});
    j["terms"] = std::move(terms);
    j["train_inputs"] = io::rows_to_json(model.train_inputs.rows());
    j["alpha"] = io::rows_to_json(model.alpha.rows());
    j["objective_trace"] = model.objective_trace;
    j["solver_iterations"] = model.solver_iterations;
    j["mkl_iterations"] = model.mkl_iterations;
    j["mkl_converged"] = model.mkl_converged;
    return j.dump(1) + "\n";
}

MovklModel model_from_json(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        fail(ErrorKind::Data, std::string("model archive is not valid JSON: ") + e.what());
    }
    try {
        require(j.at("format").get<std::string>() == "movkl-model", ErrorKind::Data, "not a movkl model archive");
        const int version = j.at("version").get<int>();
        require(version == kModelFormatVersion, ErrorKind::Data,
                "unsupported model archive version " + std::to_string(version));
        const GridPtr in_grid = io::grid_from_json(j.at("input_grid"));
        const GridPtr out_grid = io::grid_from_json(j.at("output_grid"));
        const double r = io::norm_exponent_from_json(j.at("r"));

        std::vector<OvKernelTerm> terms;
        for (const auto& t : j.at("terms"))
            terms.push_back(OvKernelTerm{io::scalar_from_json(t.at("scalar")), io::operator_from_json(t.at("operator"), out_grid),
                                         t.at("weight").get<double>()});
        KernelStack stack(std::move(terms), r);
        CurveVec inputs(in_grid, io::rows_from_json(j.at("train_inputs"), in_grid->size()));
        CurveVec alpha(out_grid, io::rows_from_json(j.at("alpha"), out_grid->size()));
        require(inputs.count() == alpha.count(), ErrorKind::Data, "model archive: alpha and inputs disagree on n");

        MovklModel model{std::move(alpha),
                         stack.weights(),
                         std::move(stack),
                         std::move(inputs),
                         j.at("lambda").get<double>(),
                         r,
                         j.at("objective_trace").get<std::vector<double>>(),
                         j.at("solver_iterations").get<std::vector<int>>(),
                         j.at("mkl_iterations").get<int>(),
                         j.at("mkl_converged").get<bool>()};
        model.target = j.value("target", std::string("targets"));
        return model;
    } catch (const json::exception& e) {
        fail(ErrorKind::Data, std::string("malformed model archive: ") + e.what());
    }
}

void save_model(const std::filesystem::path& path, const MovklModel& model)
{
    std::ofstream out(path, std::ios::binary);
    require(static_cast<bool>(out), ErrorKind::Io, "cannot write model archive " + path.string());
    out << model_to_json(model);
    require(static_cast<bool>(out), ErrorKind::Io, "failed writing model archive " + path.string());
}

MovklModel load_model(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), ErrorKind::Io, "cannot open model archive " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return model_from_json(ss.str());
}

} // namespace movkl
