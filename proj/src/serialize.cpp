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

#include "movkl/serialize.hpp"

#include <cmath>
#include <vector>

#include "movkl/errors.hpp"

namespace movkl::io {

using nlohmann::json;

json grid_to_json(const Grid& grid)
{
    return {{"points", std::vector<double>(grid.points().begin(), grid.points().end())},
            {"weights", std::vector<double>(grid.weights().begin(), grid.weights().end())}};
}

GridPtr grid_from_json(const json& j)
{
    return std::make_shared<const Grid>(j.at("points").get<std::vector<double>>(), j.at("weights").get<std::vector<double>>());
}

json scalar_to_json(const ScalarKernel& k)
{
    json j = k.kind() == ScalarKind::Gaussian
                 ? json{{"kind", "gaussian"}, {"bandwidth", k.bandwidth()}, {"normalize", k.normalize()}}
                 : json{{"kind", "polynomial"}, {"degree", k.degree()}, {"offset", k.offset()}, {"normalize", k.normalize()}};
    j["scale"] = k.scale();
    return j;
}

ScalarKernel scalar_from_json(const json& j)
{
    const auto kind = j.at("kind").get<std::string>();
    const bool normalize = j.value("normalize", false);
    const double scale = j.value("scale", 1.0);
    if (kind == "gaussian")
        return ScalarKernel::gaussian(j.at("bandwidth").get<double>(), normalize).with_scale(scale);
    if (kind == "polynomial")
        return ScalarKernel::polynomial(j.at("degree").get<int>(), j.value("offset", 1.0), normalize).with_scale(scale);
    fail(ErrorKind::Config, "unknown scalar kernel kind '" + kind + "'");
}

json operator_to_json(const OutputOperator& op)
{
    if (op.kind() == OperatorKind::Integral)
        return {{"kind", "integral"}, {"rank", op.rank()}};
    return {{"kind", to_string(op.kind())}};
}

OutputOperator operator_from_json(const json& j, const GridPtr& grid)
{
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "identity")
        return OutputOperator::identity(grid);
    if (kind == "multiplication")
        return OutputOperator::multiplication(grid);
    if (kind == "integral")
        return OutputOperator::integral(grid, j.value("rank", std::size_t{0}));
    fail(ErrorKind::Config, "unknown operator kind '" + kind + "'");
}

json rows_to_json(const Eigen::MatrixXd& rows)
{
    json out = json::array();
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
        std::vector<double> r(static_cast<std::size_t>(rows.cols()));
        for (Eigen::Index c = 0; c < rows.cols(); ++c)
            r[static_cast<std::size_t>(c)] = rows(i, c);
        out.push_back(std::move(r));
    }
    return out;
}

Eigen::MatrixXd rows_from_json(const json& j, std::size_t width)
{
    Eigen::MatrixXd out(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(width));
    Eigen::Index i = 0;
    for (const auto& row : j) {
        const auto v = row.get<std::vector<double>>();
        require(v.size() == width, ErrorKind::Data, "row " + std::to_string(i) + " has the wrong length");
        for (std::size_t c = 0; c < width; ++c)
            out(i, static_cast<Eigen::Index>(c)) = v[c];
        ++i;
    }
    return out;
}

json norm_exponent_to_json(double r)
{
    if (std::isinf(r))
        return "inf";
    return r;
}

double norm_exponent_from_json(const json& j)
{
    if (j.is_string()) {
        require(j.get<std::string>() == "inf", ErrorKind::Config, "r must be a number >= 1 or \"inf\"");
        return kInfiniteNorm;
    }
    const double r = j.get<double>();
    require(r >= 1.0, ErrorKind::Config, "r must be >= 1");
    return r;
}

void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where)
{
    require(j.is_object(), ErrorKind::Config, where + " must be an object");
    for (const auto& item : j.items()) {
        bool ok = false;
        for (const char* a : allowed)
            ok = ok || item.key() == a;
        require(ok, ErrorKind::Config, "unknown key '" + item.key() + "' in " + where);
    }
}

} // namespace movkl::io
