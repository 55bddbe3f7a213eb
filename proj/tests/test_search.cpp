#include <doctest.h>

#include <cmath>

#include "curvkit/gamma_search.hpp"
#include "curvkit/golden_section.hpp"
#include "curvkit/mesh.hpp"

using namespace curvkit;

TEST_CASE("golden section on analytic functions") {
    SUBCASE("convex quadratic") {
        auto r = golden_section([](double x) { return (x - 0.3) * (x - 0.3); }, 0.0, 1.0, 1e-6);
        CHECK(r.x_min == doctest::Approx(0.3).epsilon(1e-4));
        CHECK(std::abs(r.x_min - 0.3) < 1e-5);
    }
    SUBCASE("kinked absolute value") {
        auto r = golden_section([](double x) { return std::abs(x - 0.7); }, 0.0, 1.0, 1e-6);
        CHECK(std::abs(r.x_min - 0.7) < 1e-6 + 1e-9);
    }
    SUBCASE("monotone functions converge to an endpoint") {
        auto inc = golden_section([](double x) { return x; }, 0.0, 1.0, 1e-5);
        CHECK(inc.x_min < 1e-4);
        auto dec = golden_section([](double x) { return -x; }, 0.0, 1.0, 1e-5);
        CHECK(dec.x_min > 1.0 - 1e-4);
    }
    SUBCASE("bracket containment for unimodal functions") {
        for (double true_min : {0.05, 0.33, 0.5, 0.92}) {
            auto f = [true_min](double x) { return std::cosh(3.0 * (x - true_min)); };
            auto r = golden_section(f, 0.0, 1.0, 1e-7);
            for (const auto& [lo, hi] : r.bracket_history) {
                CHECK(lo <= true_min + 1e-12);
                CHECK(hi >= true_min - 1e-12);
            }
            CHECK(std::abs(r.x_min - true_min) < 1e-6);
        }
    }
    SUBCASE("evaluation count bound") {
        int evals_allowed =
            static_cast<int>(std::ceil(std::log(1.0 / 1e-6) / std::log(1.6180339887))) + 2;
        auto r = golden_section([](double x) { return x * x; }, 0.0, 1.0, 1e-6);
        CHECK(r.evaluations <= evals_allowed);
        CHECK(static_cast<int>(r.probes.size()) == r.evaluations);
    }
    SUBCASE("invalid bracket") {
        CHECK_THROWS_AS(golden_section([](double x) { return x; }, 1.0, 0.0, 1e-6),
                        InvalidBracket);
        CHECK_THROWS_AS(golden_section([](double x) { return x; }, 0.0, 1.0, -1.0),
                        InvalidParameter);
    }
    SUBCASE("deterministic") {
        auto f = [](double x) { return std::sin(5 * x) + x * x; };
        auto a = golden_section(f, 0.0, 1.0, 1e-6);
        auto b = golden_section(f, 0.0, 1.0, 1e-6);
        CHECK(a.x_min == b.x_min);
        CHECK(a.evaluations == b.evaluations);
    }
}

TEST_CASE("stabilization search on a torus improves the normal error") {
    SquishedTorus t(1.0, 0.5, 1.0);
    TriMesh mesh = generate_torus(1.0, 0.5, 1.0, 41, 41, 0.3, 7);
    NormalErrorOfGamma f(mesh, t);
    double eps0 = f(0.0);
    auto r = golden_section(f, 0.0, 1.0, 1e-3);
    CHECK(r.x_min > 0.0);
    CHECK(r.f_min < eps0);
    // the found minimum beats both bracket ends
    CHECK(r.f_min <= f(1.0));
}
