#include "curvkit/pn_triangle.hpp"

#include "curvkit/errors.hpp"

namespace curvkit {

namespace {

// Edge control point near corner i, toward corner j: pull the third-point back
// into corner i's tangent plane (Vlachos construction).
Vec3 edge_point(const Vec3& pi, const Vec3& pj, const Vec3& ni) {
    double w = dot(pj - pi, ni);
    return (pi * 2.0 + pj - ni * w) / 3.0;
}

}  // namespace

PNPatch pn_control_points(const std::array<Vec3, 3>& corners,
                          const std::array<Vec3, 3>& normals) {
    PNPatch patch;
    patch.corners = corners;
    patch.normals = normals;
    const Vec3 &p1 = corners[0], &p2 = corners[1], &p3 = corners[2];
    const Vec3 &n1 = normals[0], &n2 = normals[1], &n3 = normals[2];

    patch.b[0] = p1;
    patch.b[1] = p2;
    patch.b[2] = p3;
    patch.b[3] = edge_point(p1, p2, n1);  // near 1 toward 2
    patch.b[4] = edge_point(p2, p1, n2);  // near 2 toward 1
    patch.b[5] = edge_point(p2, p3, n2);  // near 2 toward 3
    patch.b[6] = edge_point(p3, p2, n3);  // near 3 toward 2
    patch.b[7] = edge_point(p3, p1, n3);  // near 3 toward 1
    patch.b[8] = edge_point(p1, p3, n1);  // near 1 toward 3

    Vec3 E{};
    for (int k = 3; k <= 8; ++k) E += patch.b[k];
    E = E / 6.0;
    Vec3 V = (p1 + p2 + p3) / 3.0;
    patch.b[9] = E + (E - V) * 0.5;
    return patch;
}

std::array<double, 10> pn_basis(double t1, double t2, double t3) {
    return {
        t1 * t1 * t1,        // corner 1
        t2 * t2 * t2,        // corner 2
        t3 * t3 * t3,        // corner 3
        3.0 * t1 * t1 * t2,  // near 1 toward 2
        3.0 * t2 * t2 * t1,  // near 2 toward 1
        3.0 * t2 * t2 * t3,  // near 2 toward 3
        3.0 * t3 * t3 * t2,  // near 3 toward 2
        3.0 * t3 * t3 * t1,  // near 3 toward 1
        3.0 * t1 * t1 * t3,  // near 1 toward 3
        6.0 * t1 * t2 * t3,  // interior
    };
}

Vec3 pn_evaluate(const PNPatch& patch, double t1, double t2, double t3) {
    auto w = pn_basis(t1, t2, t3);
    Vec3 p{};
    for (int k = 0; k < 10; ++k) p += patch.b[k] * w[k];
    return p;
}

Vec3 pn_edge_midpoint(const PNPatch& patch, int i, int j) {
    double t[3] = {0.0, 0.0, 0.0};
    t[i] = 0.5;
    t[j] = 0.5;
    return pn_evaluate(patch, t[0], t[1], t[2]);
}

TessellationGrid::TessellationGrid(int N) : level(N) {
    if (N < 1) throw InvalidParameter("TessellationGrid: level must be >= 1");
    // Lattice (i, j) with i + j <= N; barycentrics (i/N, j/N, 1 - i/N - j/N).
    std::vector<std::vector<int>> index(N + 1, std::vector<int>(N + 1, -1));
    for (int i = 0; i <= N; ++i) {
        for (int j = 0; j + i <= N; ++j) {
            index[i][j] = static_cast<int>(barycentric.size());
            double t1 = static_cast<double>(i) / N;
            double t2 = static_cast<double>(j) / N;
            barycentric.push_back({t1, t2, 1.0 - t1 - t2});
        }
    }
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j + i < N; ++j) {
            triangles.push_back({index[i][j], index[i + 1][j], index[i][j + 1]});
            if (i + j + 2 <= N)
                triangles.push_back({index[i + 1][j], index[i + 1][j + 1], index[i][j + 1]});
        }
    }
}

std::vector<Vec3> pn_evaluate(const PNPatch& patch, const TessellationGrid& grid) {
    std::vector<Vec3> points;
    points.reserve(grid.barycentric.size());
    for (const auto& t : grid.barycentric) points.push_back(pn_evaluate(patch, t[0], t[1], t[2]));
    return points;
}

}  // namespace curvkit
