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

#include "movkl/errors.hpp"
#include "movkl/funcspace.hpp"
#include "oracles.hpp"

using namespace movkl;

TEST_CASE("grid validation")
{
    CHECK_THROWS_AS(Grid({0.0}, {1.0}), Error);
    CHECK_THROWS_AS(Grid({0.0, 0.0}, {1.0, 1.0}), Error);
    CHECK_THROWS_AS(Grid({0.0, 1.0}, {1.0, 0.0}), Error);
    CHECK_THROWS_AS(Grid({0.0, 1.0}, {1.0}), Error);
    CHECK_NOTHROW(Grid({0.0, 1.0}, {0.5, 0.5}));
}

TEST_CASE("uniform trapezoid weights")
{
    const auto g = Grid::uniform(0.0, 1.0, 5);
    const double h = 0.25;
    CHECK(g->weights()[0] == doctest::Approx(h / 2));
    CHECK(g->weights()[4] == doctest::Approx(h / 2));
    for (int j = 1; j < 4; ++j)
        CHECK(g->weights()[j] == doctest::Approx(h));

    const std::vector<double> t{0.0, 0.1, 0.4, 1.0};
    const auto irregular = Grid::trapezoid(t);
    const auto expect = oracle::trapezoid(t);
    for (std::size_t j = 0; j < t.size(); ++j)
        CHECK(irregular->weights()[j] == doctest::Approx(expect[j]).epsilon(1e-15));
}

TEST_CASE("stacked grid keeps per-channel weights")
{
    const auto base = Grid::uniform(0.0, 1.0, 4);
    const auto s = Grid::stacked(*base, 3, 2.0);
    REQUIRE(s->size() == 12);
    for (std::size_t c = 0; c < 3; ++c)
        for (std::size_t j = 0; j < 4; ++j) {
            CHECK(s->points()[c * 4 + j] == doctest::Approx(base->points()[j] + 2.0 * static_cast<double>(c)));
            CHECK(s->weights()[c * 4 + j] == doctest::Approx(base->weights()[j]));
        }
}

TEST_CASE("curves reject non-finite values and wrong lengths")
{
    const auto g = Grid::uniform(0.0, 1.0, 3);
    CHECK_THROWS_AS(Curve(g, Eigen::Vector3d(0.0, NAN, 1.0)), Error);
    CHECK_THROWS_AS(Curve(g, Eigen::Vector2d(0.0, 1.0)), Error);
    CHECK_THROWS_AS(Curve(g, Eigen::Vector3d(0.0, INFINITY, 1.0)), Error);
}

TEST_CASE("l2_inner on constants is exact")
{
    for (std::size_t m : {2u, 7u, 100u, 1001u}) {
        const auto g = Grid::uniform(0.0, 1.0, m);
        const Curve one = Curve::constant(g, 1.0);
        CHECK(std::abs(l2_inner(one, one) - 1.0) <= 1e-12);
        CHECK(l2_inner(Curve::zeros(g), one) == 0.0);
        const Curve two = Curve::constant(g, 2.0);
        CHECK(std::abs(l2_norm_sq(two) - 4.0) <= 1e-12);
        CHECK(l2_norm_sq(Curve::zeros(g)) == 0.0);
    }
}

TEST_CASE("l2_inner of t with itself converges to 1/3")
{
    auto integral = [](std::size_t m) {
        const auto g = Grid::uniform(0.0, 1.0, m);
        Eigen::VectorXd t(static_cast<Eigen::Index>(m));
        for (std::size_t j = 0; j < m; ++j)
            t[static_cast<Eigen::Index>(j)] = g->points()[j];
        const Curve c(g, t);
        return l2_norm_sq(c);
    };
    const double coarse = integral(101);
    const double fine = integral(1001);
    CHECK(std::abs(coarse - 1.0 / 3.0) < 1e-3);
    // Trapezoid error is O(h^2): refining tenfold shrinks it about a hundredfold.
    CHECK(std::abs(fine - 1.0 / 3.0) < std::abs(coarse - 1.0 / 3.0) / 50.0);
    // Exact trapezoid error for t^2 is h^2 / 6.
    CHECK(std::abs((coarse - 1.0 / 3.0) - 1e-4 / 6.0) < 1e-12);
}

TEST_CASE("grid mismatch is a dimension error")
{
    const auto a = Grid::uniform(0.0, 1.0, 4);
    const auto b = Grid::uniform(0.0, 2.0, 4);
    try {
        (void)l2_inner(Curve::zeros(a), Curve::zeros(b));
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Dimension);
    }
    // Equal geometry on distinct grid objects is accepted.
    const auto a2 = Grid::uniform(0.0, 1.0, 4);
    CHECK(l2_inner(Curve::constant(a, 1.0), Curve::constant(a2, 1.0)) == doctest::Approx(1.0));
}

TEST_CASE("vec_inner matches the flat weighted sum")
{
    detail::Draws rng(7);
    const auto g = Grid::trapezoid({0.0, 0.05, 0.2, 0.3, 0.55, 0.6, 0.9, 1.0});
    const CurveVec a = oracle::random_curves(rng, g, 3);
    const CurveVec b = oracle::random_curves(rng, g, 3);
    const double expect = oracle::flat_weighted_sum(a.rows(), b.rows(), oracle::weights_of(*g));
    CHECK(std::abs(vec_inner(a, b) - expect) <= 1e-12 * std::max(1.0, std::abs(expect)));

    const CurveVec z = CurveVec::zeros(g, 2);
    CHECK(vec_inner(z, z) == 0.0);
    const CurveVec one = a.select(std::vector<std::size_t>{1});
    const CurveVec oneb = b.select(std::vector<std::size_t>{1});
    CHECK(vec_inner(one, oneb) == doctest::Approx(l2_inner(a.curve(1), b.curve(1))).epsilon(1e-14));
    CHECK_THROWS_AS((void)vec_inner(a, z), Error);
}

TEST_CASE("inner product properties on random pairs")
{
    detail::Draws rng(11);
    const auto g = Grid::uniform(-1.0, 2.0, 17);
    for (int trial = 0; trial < 200; ++trial) {
        const CurveVec v = oracle::random_curves(rng, g, 3);
        const Curve a = v.curve(0), b = v.curve(1), a2 = v.curve(2);
        const double ab = l2_inner(a, b);
        CHECK(ab == l2_inner(b, a));
        CHECK(ab * ab <= l2_norm_sq(a) * l2_norm_sq(b) + 1e-12);
        const double c = rng.uniform(-3.0, 3.0);
        const Curve lin(g, c * a.values() + a2.values());
        const double lhs = l2_inner(lin, b);
        const double rhs = c * ab + l2_inner(a2, b);
        CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs)));
        CHECK(l2_norm_sq(a) > 0.0);
        CHECK(l2_norm_sq(a) == doctest::Approx(l2_inner(a, a)).epsilon(1e-15));
    }
}

TEST_CASE("CurveVec construction and selection")
{
    const auto g = Grid::uniform(0.0, 1.0, 3);
    const auto h = Grid::uniform(0.0, 1.0, 4);
    std::vector<Curve> mixed{Curve::zeros(g), Curve::zeros(h)};
    CHECK_THROWS_AS(CurveVec{std::span<const Curve>(mixed)}, Error);
    std::vector<Curve> same{Curve::constant(g, 1.0), Curve::constant(g, 2.0)};
    const CurveVec v{std::span<const Curve>(same)};
    CHECK(v.count() == 2);
    CHECK(v.select(std::vector<std::size_t>{1}).curve(0)[2] == 2.0);
    CHECK_THROWS_AS((void)v.select(std::vector<std::size_t>{5}), Error);
}
