#include <doctest.h>

#include <cmath>
#include <random>

#include "curvkit/pn_triangle.hpp"
#include "support.hpp"

using namespace curvkit;
using namespace curvkit::testing;

namespace {

PNPatch sphere_patch(double rho) {
    // Equilateral-ish spherical cap triangle with exact normals.
    std::array<Vec3, 3> p = {normalized(Vec3{1, 0.2, 0.2}) * rho,
                             normalized(Vec3{0.2, 1, 0.2}) * rho,
                             normalized(Vec3{0.2, 0.2, 1}) * rho};
    std::array<Vec3, 3> n = {normalized(p[0]), normalized(p[1]), normalized(p[2])};
    return pn_control_points(p, n);
}

}  // namespace

TEST_CASE("PN control points") {
    SUBCASE("corners are interpolated") {
        PNPatch patch = sphere_patch(1.0);
        for (int c = 0; c < 3; ++c) CHECK(norm(patch.b[c] - patch.corners[c]) == 0.0);
    }
    SUBCASE("edge points stay in the near corner's tangent plane") {
        PNPatch patch = sphere_patch(2.0);
        // (edge point k, its near corner): see control-point layout
        const int near_corner[6] = {0, 1, 1, 2, 2, 0};
        for (int k = 0; k < 6; ++k) {
            Vec3 d = patch.b[3 + k] - patch.corners[near_corner[k]];
            CHECK(std::abs(dot(d, patch.normals[near_corner[k]])) < 1e-12);
        }
    }
    SUBCASE("planar triangle with face normals stays planar") {
        std::array<Vec3, 3> p = {Vec3{0, 0, 1}, Vec3{2, 0, 1}, Vec3{0, 3, 1}};
        Vec3 n{0, 0, 1};
        PNPatch patch = pn_control_points(p, {n, n, n});
        for (const Vec3& b : patch.b) CHECK(b.z == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("straight edge with symmetric normals puts thirds on the chord") {
        std::array<Vec3, 3> p = {Vec3{0, 0, 0}, Vec3{1, 0, 0}, Vec3{0.5, 1, 0}};
        Vec3 n{0, 0, 1};
        PNPatch patch = pn_control_points(p, {n, n, n});
        CHECK(norm(patch.b[3] - Vec3{1.0 / 3.0, 0, 0}) < 1e-15);  // near 1 toward 2
        CHECK(norm(patch.b[4] - Vec3{2.0 / 3.0, 0, 0}) < 1e-15);  // near 2 toward 1
    }
    SUBCASE("sphere patch interior point bulges outward") {
        PNPatch patch = sphere_patch(1.0);
        Vec3 centroid = (patch.corners[0] + patch.corners[1] + patch.corners[2]) / 3.0;
        Vec3 d = patch.b[9] - centroid;
        CHECK(dot(d, centroid) > 0.0);
    }
}

TEST_CASE("PN evaluation") {
    SUBCASE("partition of unity") {
        std::mt19937 rng(4);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int trial = 0; trial < 200; ++trial) {
            double a = u(rng), b = u(rng) * (1.0 - a);
            auto w = pn_basis(a, b, 1.0 - a - b);
            double s = 0.0;
            for (double x : w) s += x;
            CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    SUBCASE("corners reproduce exactly") {
        PNPatch patch = sphere_patch(1.5);
        CHECK(norm(pn_evaluate(patch, 1, 0, 0) - patch.corners[0]) < 1e-15);
        CHECK(norm(pn_evaluate(patch, 0, 1, 0) - patch.corners[1]) < 1e-15);
        CHECK(norm(pn_evaluate(patch, 0, 0, 1) - patch.corners[2]) < 1e-15);
    }
    SUBCASE("planar patch with face normals is affine-exact") {
        std::array<Vec3, 3> p = {Vec3{0, 0, 0}, Vec3{2, 0.5, 0}, Vec3{0.3, 1.7, 0}};
        Vec3 n{0, 0, 1};
        PNPatch patch = pn_control_points(p, {n, n, n});
        std::mt19937 rng(8);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int trial = 0; trial < 100; ++trial) {
            double a = u(rng), b = u(rng) * (1.0 - a), c = 1.0 - a - b;
            Vec3 lin = p[0] * a + p[1] * b + p[2] * c;
            CHECK(norm(pn_evaluate(patch, a, b, c) - lin) < 1e-14);
        }
    }
    SUBCASE("sphere patch: midpoint evaluations leave the chord plane toward the sphere") {
        PNPatch patch = sphere_patch(1.0);
        Vec3 chord_normal = normalized(cross(patch.corners[1] - patch.corners[0],
                                             patch.corners[2] - patch.corners[0]));
        double plane_offset = dot(chord_normal, patch.corners[0]);
        TessellationGrid grid(2);  // corners + edge midpoints
        auto points = pn_evaluate(patch, grid);
        int outside = 0;
        for (const auto& t : grid.barycentric) {
            bool corner = t[0] == 1.0 || t[1] == 1.0 || t[2] == 1.0;
            if (corner) continue;
            size_t idx = &t - grid.barycentric.data();
            double side = dot(chord_normal, points[idx]) - plane_offset;
            CHECK(side > 0.0);  // outward, toward the sphere surface
            ++outside;
        }
        CHECK(outside == 3);
        // and the dedicated edge-midpoint helper agrees with grid evaluation
        Vec3 m01 = pn_edge_midpoint(patch, 0, 1);
        bool found = false;
        for (size_t i = 0; i < grid.barycentric.size(); ++i) {
            const auto& t = grid.barycentric[i];
            if (t[0] == 0.5 && t[1] == 0.5) {
                CHECK(norm(points[i] - m01) < 1e-15);
                found = true;
            }
        }
        CHECK(found);
    }
}

TEST_CASE("tessellation grid counts") {
    for (int level : {1, 2, 3, 4, 7}) {
        TessellationGrid grid(level);
        CHECK(static_cast<int>(grid.barycentric.size()) == (level + 1) * (level + 2) / 2);
        CHECK(static_cast<int>(grid.triangles.size()) == level * level);
        for (const auto& t : grid.barycentric) {
            CHECK(t[0] + t[1] + t[2] == doctest::Approx(1.0).epsilon(1e-15));
            CHECK(t[2] >= -1e-15);
        }
        for (const auto& tri : grid.triangles)
            for (int c : tri) CHECK(c < static_cast<int>(grid.barycentric.size()));
    }
    CHECK_THROWS_AS(TessellationGrid(0), InvalidParameter);
}
