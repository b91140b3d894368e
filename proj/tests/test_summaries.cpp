#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"

#include "tda/summaries.hpp"

using namespace tda;

namespace {

PersistenceDiagram random_diagram(int n, std::mt19937& rng) {
    std::uniform_real_distribution<double> u(0.0, 2.0);
    PersistenceDiagram d{1, {}};
    for (int i = 0; i < n; ++i) {
        const double b = u(rng);
        d.points.push_back({b, b + u(rng)});
    }
    return d;
}

} // namespace

TEST_CASE("tent values") {
    const DiagramPoint x{0.0, 2.0};
    CHECK(triangle_function(x, 1.0) == 1.0);
    CHECK(triangle_function(x, 0.0) == 0.0);
    CHECK(triangle_function(x, 2.0) == 0.0);
    CHECK(triangle_function(x, -0.5) == 0.0);
    CHECK(triangle_function(x, 2.5) == 0.0);
    CHECK(triangle_function({1.0, 3.0}, 1.5) == 0.5);
    CHECK(triangle_function({1.0, 3.0}, 2.75) == doctest::Approx(0.25).epsilon(1e-13));
    CHECK_THROWS_AS(triangle_function({0.0, kInfiniteDeath}, 1.0), DomainError);
}

TEST_CASE("landscape levels select the k-th largest tent") {
    const PersistenceDiagram d{1, {{0.0, 2.0}, {1.0, 3.0}}};
    CHECK(landscape(d, 1, 1.0) == 1.0);
    CHECK(landscape(d, 2, 1.5) == 0.5); // both tents give 0.5 there
    CHECK(landscape(d, 3, 1.5) == 0.0);
    CHECK(landscape(PersistenceDiagram{1, {}}, 1, 0.5) == 0.0);
    CHECK(landscape(PersistenceDiagram{1, {{0.0, 2.0}}}, 2, 1.0) == 0.0);
    CHECK_THROWS_AS(landscape(d, 0, 1.0), ConfigError);
}

TEST_CASE("landscape levels match a sort-based oracle and are nested") {
    std::mt19937 rng(51);
    for (int trial = 0; trial < 20; ++trial) {
        const PersistenceDiagram d = random_diagram(1 + static_cast<int>(rng() % 6), rng);
        std::uniform_real_distribution<double> u(-0.5, 4.5);
        const double t = u(rng);
        std::vector<double> tents;
        for (const auto& p : d.points) tents.push_back(triangle_function(p, t));
        std::sort(tents.begin(), tents.end(), std::greater<>());
        for (int k = 1; k <= static_cast<int>(tents.size()); ++k)
            CHECK(landscape(d, k, t) == tents[k - 1]);
        for (int k = 2; k <= static_cast<int>(tents.size()) + 1; ++k)
            CHECK(landscape(d, k, t) <= landscape(d, k - 1, t));
        CHECK(landscape(d, 1, t) >= 0.0);
    }
}

TEST_CASE("landscapes vanish outside the diagram's support") {
    const PersistenceDiagram d{1, {{1.0, 2.0}, {1.5, 3.0}}};
    CHECK(landscape(d, 1, 0.99) == 0.0);
    CHECK(landscape(d, 1, 3.01) == 0.0);
}

TEST_CASE("silhouette is a persistence-weighted tent average") {
    const PersistenceDiagram single{1, {{0.0, 2.0}}};
    CHECK(silhouette(single, 1.0, 1.0) == 1.0);
    CHECK(silhouette(single, 3.0, 0.5) == 0.5); // weights cancel for one point

    // equal persistences reduce to the plain average no matter the power
    const PersistenceDiagram pair{1, {{0.0, 2.0}, {1.0, 3.0}}};
    for (double q : {0.5, 1.0, 2.0}) {
        const double want = 0.5 * (triangle_function({0.0, 2.0}, 1.5) +
                                   triangle_function({1.0, 3.0}, 1.5));
        CHECK(silhouette(pair, q, 1.5) == doctest::Approx(want).epsilon(1e-13));
    }

    CHECK(silhouette(PersistenceDiagram{1, {}}, 1.0, 1.0) == 0.0);
    CHECK_THROWS_AS(silhouette(single, 0.0, 1.0), ConfigError);
    CHECK_THROWS_AS(silhouette(single, -1.0, 1.0), ConfigError);
}

TEST_CASE("silhouette matches its defining formula on random input") {
    std::mt19937 rng(52);
    for (int trial = 0; trial < 20; ++trial) {
        const PersistenceDiagram d = random_diagram(1 + static_cast<int>(rng() % 5), rng);
        std::uniform_real_distribution<double> u(0.0, 4.0);
        const double t = u(rng);
        const double q = 0.5 + u(rng);
        double num = 0.0, den = 0.0;
        for (const auto& p : d.points) {
            const double w = std::pow(p.death - p.birth, q);
            num += w * triangle_function(p, t);
            den += w;
        }
        const double want = den == 0.0 ? 0.0 : num / den;
        CHECK(silhouette(d, q, t) == doctest::Approx(want).epsilon(1e-12));

        double best = 0.0;
        for (const auto& p : d.points) best = std::max(best, triangle_function(p, t));
        CHECK(silhouette(d, q, t) >= 0.0);
        CHECK(silhouette(d, q, t) <= best + 1e-12);
    }
}

TEST_CASE("zero-persistence-only diagrams give the zero silhouette") {
    const PersistenceDiagram flat{1, {{1.0, 1.0}, {2.0, 2.0}}};
    CHECK(silhouette(flat, 1.0, 1.0) == 0.0);
}

TEST_CASE("uniform grid endpoints and spacing") {
    const std::vector<double> g = uniform_grid(0.0, 1.0, 5);
    REQUIRE(g.size() == 5);
    CHECK(g.front() == 0.0);
    CHECK(g.back() == 1.0);
    CHECK(g[2] == doctest::Approx(0.5).epsilon(1e-13));
    CHECK_THROWS_AS(uniform_grid(0.0, 1.0, 1), ConfigError);
    CHECK_THROWS_AS(uniform_grid(1.0, 0.0, 5), ConfigError);
}

TEST_CASE("landscape inner product matches a direct trapezoid sum") {
    const PersistenceDiagram a{1, {{0.0, 2.0}}};
    const PersistenceDiagram b{1, {{0.5, 2.5}}};
    const std::vector<double> grid = uniform_grid(0.0, 3.0, 61);
    double want = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double f0 = landscape(a, 1, grid[i - 1]) * landscape(b, 1, grid[i - 1]);
        const double f1 = landscape(a, 1, grid[i]) * landscape(b, 1, grid[i]);
        want += 0.5 * (f0 + f1) * (grid[i] - grid[i - 1]);
    }
    CHECK(landscape_l2_inner(a, b, 1, grid) == doctest::Approx(want).epsilon(1e-12));

    CHECK(landscape_l2_inner(a, a, 3, grid) >= 0.0);
    CHECK(landscape_l2_inner(a, b, 3, grid) == landscape_l2_inner(b, a, 3, grid));
    CHECK(landscape_l2_inner(PersistenceDiagram{1, {}}, b, 3, grid) == 0.0);
}

TEST_CASE("unsorted grids are rejected") {
    const PersistenceDiagram a{1, {{0.0, 2.0}}};
    CHECK_THROWS_AS(landscape_l2_inner(a, a, 1, {0.0, 2.0, 1.0}), ConfigError);
    CHECK_THROWS_AS(landscape_l2_inner(a, a, 1, {0.0}), ConfigError);
}
