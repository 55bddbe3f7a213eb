#include <doctest.h>

#include <cmath>
#include <random>

#include "curvkit/implicit.hpp"
#include "curvkit/mesh.hpp"

using namespace curvkit;

namespace {

Vec3 fd_normal(const ImplicitSurface& s, const Vec3& x, double eps = 1e-6) {
    Vec3 g;
    for (int c = 0; c < 3; ++c) {
        Vec3 hi = x, lo = x;
        hi[c] += eps;
        lo[c] -= eps;
        g[c] = (s.phi(hi) - s.phi(lo)) / (2.0 * eps);
    }
    return normalized(g);
}

// Surface divergence of the extended unit normal field; for a level-set
// extension this equals k1 + k2 on the surface.
double fd_curvature(const ImplicitSurface& s, const Vec3& x, double eps = 1e-5) {
    double div = 0.0;
    for (int c = 0; c < 3; ++c) {
        Vec3 hi = x, lo = x;
        hi[c] += eps;
        lo[c] -= eps;
        div += (exact_normal(s, hi)[c] - exact_normal(s, lo)[c]) / (2.0 * eps);
    }
    return 0.5 * div;
}

Vec3 torus_point(const SquishedTorus& t, double theta, double phi) {
    double ring = t.R() + t.r() * std::cos(theta);
    return {ring * std::cos(phi), ring * std::sin(phi),
            t.r() * std::sin(theta) / std::sqrt(t.a())};
}

}  // namespace

TEST_CASE("phi values") {
    SquishedTorus t1(1.0, 0.5, 1.0);
    CHECK(t1.phi({1.5, 0, 0}) == doctest::Approx(0.0));
    CHECK(t1.phi({1.0, 0, 0.5}) == doctest::Approx(0.0));
    SquishedTorus t4(1.0, 0.5, 4.0);
    CHECK(t4.phi({1.0, 0, 0.5}) == doctest::Approx(0.75));
}

TEST_CASE("exact normals") {
    SquishedTorus t1(1.0, 0.5, 1.0);
    CHECK(norm(exact_normal(t1, {1.5, 0, 0}) - Vec3{1, 0, 0}) < 1e-14);
    CHECK(norm(exact_normal(t1, {0.5, 0, 0}) - Vec3{-1, 0, 0}) < 1e-14);
    SquishedTorus t4(1.0, 0.5, 4.0);
    CHECK(norm(exact_normal(t4, {1.0, 0, 0.25}) - Vec3{0, 0, 1}) < 1e-14);
    CHECK_THROWS_AS(exact_normal(t1, {0, 0, 0.2}), SingularGradient);
    // tube-center circle: gradient vanishes
    CHECK_THROWS_AS(exact_normal(t1, {1.0, 0, 0}), SingularGradient);

    SUBCASE("agrees with finite differences at random surface points") {
        std::mt19937 rng(1234);
        std::uniform_real_distribution<double> angle(0.0, 2.0 * 3.14159265358979);
        for (const SquishedTorus* t : {&t1, &t4}) {
            for (int i = 0; i < 1000; ++i) {
                Vec3 x = torus_point(*t, angle(rng), angle(rng));
                CHECK(norm(exact_normal(*t, x) - fd_normal(*t, x)) < 1e-6);
            }
        }
    }
}

TEST_CASE("exact mean curvature") {
    SUBCASE("sphere: H = 1/radius with outward normal") {
        Sphere s1(1.0);
        CHECK(exact_mean_curvature(s1, {1, 0, 0}) == doctest::Approx(1.0));
        CHECK(exact_mean_curvature(s1, {0, 0, -1}) == doctest::Approx(1.0));
        Sphere s2(2.0);
        CHECK(exact_mean_curvature(s2, {0, 2, 0}) == doctest::Approx(0.5));
    }
    SUBCASE("round torus matches classical principal curvatures") {
        SquishedTorus t(1.0, 0.5, 1.0);
        CHECK(exact_mean_curvature(t, {1.5, 0, 0}) == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
        CHECK(exact_mean_curvature(t, {1.0, 0, 0.5}) == doctest::Approx(1.0).epsilon(1e-12));
        std::mt19937 rng(77);
        std::uniform_real_distribution<double> angle(0.0, 2.0 * 3.14159265358979);
        for (int i = 0; i < 200; ++i) {
            double theta = angle(rng), phi = angle(rng);
            Vec3 x = torus_point(t, theta, phi);
            CHECK(exact_mean_curvature(t, x) ==
                  doctest::Approx(t.round_mean_curvature_at_theta(theta)).epsilon(1e-10));
        }
    }
    SUBCASE("squished torus agrees with FD divergence of the exact normal") {
        SquishedTorus t(1.0, 0.5, 4.0);
        std::mt19937 rng(99);
        std::uniform_real_distribution<double> angle(0.0, 2.0 * 3.14159265358979);
        for (int i = 0; i < 200; ++i) {
            Vec3 x = torus_point(t, angle(rng), angle(rng));
            double exact = exact_mean_curvature(t, x);
            double fd = fd_curvature(t, x);
            CHECK(std::abs(exact - fd) < 1e-4 * std::max(1.0, std::abs(exact)));
        }
    }
}

TEST_CASE("projection and signed distance") {
    SquishedTorus t(1.0, 0.5, 1.0);

    SUBCASE("fixed point on the surface") {
        Vec3 x{1.5, 0, 0};
        SurfacePoint p = project_to_surface(t, x);
        CHECK(norm(p.position - x) < 1e-12);
        CHECK(p.residual <= 1e-12);
    }
    SUBCASE("radial exterior point lands on the outer equator") {
        SurfacePoint p = project_to_surface(t, {1.6, 0, 0});
        CHECK(norm(p.position - Vec3{1.5, 0, 0}) < 1e-6);
    }
    SUBCASE("idempotence") {
        std::mt19937 rng(5);
        std::uniform_real_distribution<double> angle(0.0, 2.0 * 3.14159265358979);
        std::uniform_real_distribution<double> offset(-0.2, 0.2);
        SquishedTorus t4(1.0, 0.5, 4.0);
        for (int i = 0; i < 100; ++i) {
            Vec3 x = torus_point(t4, angle(rng), angle(rng));
            x += exact_normal(t4, x) * offset(rng);
            SurfacePoint p = project_to_surface(t4, x, 1e-12);
            SurfacePoint q = project_to_surface(t4, p.position, 1e-12);
            CHECK(norm(q.position - p.position) < 1e-10);
        }
    }
    SUBCASE("far z-axis point fails") {
        CHECK_THROWS(project_to_surface(t, {0, 0, 5}));
    }
    SUBCASE("signed distance matches the a=1 closed form") {
        CHECK(signed_distance(t, {1.6, 0, 0}) == doctest::Approx(0.1).epsilon(1e-8));
        CHECK(signed_distance(t, {1.0, 0, 0.4}) == doctest::Approx(-0.1).epsilon(1e-8));
        CHECK(std::abs(signed_distance(t, {1.5, 0, 0})) < 1e-10);
        std::mt19937 rng(6);
        std::uniform_real_distribution<double> angle(0.0, 2.0 * 3.14159265358979);
        std::uniform_real_distribution<double> offset(-0.2, 0.2);
        for (int i = 0; i < 100; ++i) {
            Vec3 x = torus_point(t, angle(rng), angle(rng));
            x += exact_normal(t, x) * offset(rng);
            CHECK(signed_distance(t, x) == doctest::Approx(t.round_distance(x)).epsilon(1e-8));
        }
    }
}
