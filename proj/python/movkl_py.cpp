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


// Python bindings: curves are passed as row-stacked numpy arrays, grids as
// point arrays carrying trapezoid weights.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "movkl/data.hpp"
#include "movkl/errors.hpp"
#include "movkl/eval.hpp"
#include "movkl/kernels.hpp"
#include "movkl/learn.hpp"

namespace py = pybind11;
using namespace movkl;

namespace {

GridPtr grid_for(const std::optional<std::vector<double>>& points, Eigen::Index m)
{
    if (points)
        return Grid::trapezoid(*points);
    return Grid::uniform(0.0, 1.0, static_cast<std::size_t>(m));
}

CurveVec curves(const Eigen::MatrixXd& rows, const GridPtr& g) { return CurveVec(g, rows); }

std::vector<double> points_of(const Grid& g) { return {g.points().begin(), g.points().end()}; }

MovklModel fit_menu(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, double lambda, double r,
                    const std::vector<double>& bandwidth_factors, std::size_t rank,
                    const std::optional<std::vector<double>>& x_points, const std::optional<std::vector<double>>& y_points)
{
    const GridPtr gin = grid_for(x_points, x.cols());
    const GridPtr gout = grid_for(y_points, y.cols());
    const CurveVec xin = curves(x, gin);
    const KernelStack stack = standard_menu(median_pairwise_distance(xin), gout, rank, bandwidth_factors, r);
    FitConfig cfg;
    cfg.lambda = lambda;
    cfg.r = r;
    cfg.solve.outer_max_iter = 20000;
    return movkl_fit(stack, xin, curves(y, gout), cfg);
}

MovklModel fit_single(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, double lambda, const std::string& op,
                      std::optional<double> bandwidth, std::size_t rank, const std::optional<std::vector<double>>& x_points,
                      const std::optional<std::vector<double>>& y_points)
{
    const GridPtr gin = grid_for(x_points, x.cols());
    const GridPtr gout = grid_for(y_points, y.cols());
    const CurveVec xin = curves(x, gin);
    const double s = bandwidth ? *bandwidth : median_pairwise_distance(xin);
    OutputOperator oper = op == "identity"         ? OutputOperator::identity(gout)
                          : op == "multiplication" ? OutputOperator::multiplication(gout)
                          : op == "integral"       ? OutputOperator::integral(gout, rank)
                                                   : (fail(ErrorKind::Config, "unknown operator '" + op + "'"), OutputOperator::identity(gout));
    FitConfig cfg;
    cfg.lambda = lambda;
    return krr_fit({ScalarKernel::gaussian(s), oper, 1.0}, xin, curves(y, gout), cfg);
}

} // namespace

PYBIND11_MODULE(movkl, m)
{
    m.doc() = "Multiple operator-valued kernel learning for curve-to-curve regression";
    py::register_exception<Error>(m, "MovklError", PyExc_ValueError);

    py::class_<MovklModel>(m, "Model")
        .def_property_readonly("weights", [](const MovklModel& md) { return md.weights; })
        .def_property_readonly("alpha", [](const MovklModel& md) { return md.alpha.rows(); })
        .def_property_readonly("objective_trace", [](const MovklModel& md) { return md.objective_trace; })
        .def_property_readonly("mkl_iterations", [](const MovklModel& md) { return md.mkl_iterations; })
        .def_property_readonly("converged", [](const MovklModel& md) { return md.mkl_converged; })
        .def_property_readonly("lambda_", [](const MovklModel& md) { return md.lambda; })
        .def_property_readonly("terms", [](const MovklModel& md) {
            std::vector<std::string> out;
            for (const auto& t : md.stack.terms())
                out.push_back(t.scalar.describe() + " x " + t.op.describe());
            return out;
        })
        .def("predict",
             [](const MovklModel& md, const Eigen::MatrixXd& x) { return predict(md, CurveVec(md.input_grid(), x)).rows(); },
             py::arg("x"))
        .def("to_json", [](const MovklModel& md) { return model_to_json(md); })
        .def_static("from_json", [](const std::string& text) { return model_from_json(text); }, py::arg("text"));

    m.def("fit_menu", &fit_menu, py::arg("x"), py::arg("y"), py::arg("lambda_") = 1e-2, py::arg("r") = 2.0,
          py::arg("bandwidth_factors") = std::vector<double>{0.1, 0.5, 1.0, 5.0, 10.0}, py::arg("rank") = 0,
          py::arg("x_points") = py::none(), py::arg("y_points") = py::none(),
          "Fit the standard kernel menu; r = float('inf') keeps uniform weights.");
    m.def("fit_single", &fit_single, py::arg("x"), py::arg("y"), py::arg("lambda_") = 1e-2, py::arg("operator") = "identity",
          py::arg("bandwidth") = py::none(), py::arg("rank") = 0, py::arg("x_points") = py::none(),
          py::arg("y_points") = py::none(), "Kernel ridge regression with one Gaussian kernel and one output operator.");

    m.def(
        "rsse",
        [](const Eigen::MatrixXd& truth, const Eigen::MatrixXd& pred, const std::optional<std::vector<double>>& points) {
            const GridPtr g = grid_for(points, truth.cols());
            return rsse(CurveVec(g, truth), CurveVec(g, pred));
        },
        py::arg("truth"), py::arg("pred"), py::arg("points") = py::none());
    m.def(
        "lcr",
        [](const Eigen::MatrixXd& labels, const Eigen::MatrixXd& pred, double threshold) {
            const GridPtr g = grid_for(std::nullopt, labels.cols());
            return lcr(CurveVec(g, labels), CurveVec(g, pred), threshold);
        },
        py::arg("labels"), py::arg("pred"), py::arg("threshold") = 0.5);
    m.def("weight_update", &weight_update, py::arg("fnorms_sq"), py::arg("r"));

    m.def(
        "generate_synthetic",
        [](std::size_t n, std::size_t grid_size, std::size_t latency, std::size_t channels, double noise, std::uint64_t seed,
           bool identity_filter) {
            SynthSpec s;
            s.n_samples = n;
            s.grid_size = grid_size;
            s.latency = latency;
            s.channel_count = channels;
            s.noise_std = noise;
            s.seed = seed;
            s.identity_filter = identity_filter;
            const CurveDataset ds = generate_synthetic(s);
            py::dict out;
            out["inputs"] = ds.inputs.rows();
            out["targets"] = ds.targets.rows();
            out["labels"] = ds.labels->rows();
            out["input_points"] = points_of(*ds.input_grid());
            out["output_points"] = points_of(*ds.output_grid());
            return out;
        },
        py::arg("n_samples") = 100, py::arg("grid_size") = 200, py::arg("latency") = 15, py::arg("channel_count") = 1,
        py::arg("noise_std") = 0.1, py::arg("seed") = 1, py::arg("identity_filter") = false);
}
