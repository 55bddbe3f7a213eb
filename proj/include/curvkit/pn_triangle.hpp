#pragma once

#include <array>
#include <vector>

#include "curvkit/vec3.hpp"

namespace curvkit {

// Cubic point-normal Bezier patch over one triangle, built from the corner
// positions and unit corner normals alone. Control points:
//   b[0..2]  corners p1..p3
//   b[3..8]  edge points, each the third-point toward the far corner projected
//            into the near corner's tangent plane
//   b[9]     interior point E + (E - V)/2
struct PNPatch {
    std::array<Vec3, 10> b;
    std::array<Vec3, 3> corners;
    std::array<Vec3, 3> normals;
};

PNPatch pn_control_points(const std::array<Vec3, 3>& corners,
                          const std::array<Vec3, 3>& normals);

// Evaluate at barycentric coordinates (t1, t2, t3) of corners 1..3 (sum 1).
Vec3 pn_evaluate(const PNPatch& patch, double t1, double t2, double t3);

// The ten cubic Bernstein weights in control-point order; they sum to 1.
std::array<double, 10> pn_basis(double t1, double t2, double t3);

// Patch point above the midpoint of the edge between corners i and j.
Vec3 pn_edge_midpoint(const PNPatch& patch, int i, int j);

// Uniform barycentric sampling grid with `level` subdivisions per edge:
// (level+1)(level+2)/2 points, level^2 subtriangles.
struct TessellationGrid {
    explicit TessellationGrid(int level);
    int level;
    std::vector<std::array<double, 3>> barycentric;
    std::vector<std::array<int, 3>> triangles;
};

std::vector<Vec3> pn_evaluate(const PNPatch& patch, const TessellationGrid& grid);

}  // namespace curvkit
