#pragma once

#include <array>
#include <random>
#include <vector>

#include "curvkit/mesh.hpp"

namespace curvkit::testing {

// Regular tetrahedron centered at the origin, outward orientation.
inline TriMesh tetrahedron() {
    std::vector<Vec3> v = {{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
    std::vector<std::array<int, 3>> f = {{0, 1, 2}, {0, 2, 3}, {0, 3, 1}, {1, 3, 2}};
    return build_mesh(std::move(v), std::move(f));
}

inline TriMesh octahedron() {
    std::vector<Vec3> v = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
    std::vector<std::array<int, 3>> f = {{0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4},
                                         {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5}};
    return build_mesh(std::move(v), std::move(f));
}

// Square pyramid over [-1,1]^2 with apex (0,0,1); apex vertex index is 0.
inline TriMesh square_pyramid() {
    std::vector<Vec3> v = {{0, 0, 1}, {1, 1, 0}, {-1, 1, 0}, {-1, -1, 0}, {1, -1, 0}};
    std::vector<std::array<int, 3>> f = {{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 1},
                                         {1, 4, 3}, {1, 3, 2}};
    return build_mesh(std::move(v), std::move(f));
}

// Cushion: an n x n grid over [0,1]^2 with a flat top sheet at z = 0 and a
// slightly sunken bottom sheet, glued along the boundary. Interior vertices of
// the top sheet have exactly flat 1-rings while the mesh stays closed and
// consistently oriented (top normals +z, bottom tilted downward).
inline TriMesh flat_pillow(int n, double jitter = 0.0, unsigned seed = 1) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> noise(-jitter, jitter);
    int stride = n + 1;
    double depth = 0.3 / n;
    std::vector<Vec3> verts;
    std::vector<int> top(stride * stride), bottom(stride * stride);
    auto interior = [&](int i, int j) { return i > 0 && i < n && j > 0 && j < n; };
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) {
            double dx = (jitter > 0.0 && interior(i, j)) ? noise(rng) / n : 0.0;
            double dy = (jitter > 0.0 && interior(i, j)) ? noise(rng) / n : 0.0;
            Vec3 p{static_cast<double>(i) / n + dx, static_cast<double>(j) / n + dy, 0.0};
            top[j * stride + i] = static_cast<int>(verts.size());
            verts.push_back(p);
            if (interior(i, j)) {
                bottom[j * stride + i] = static_cast<int>(verts.size());
                verts.push_back({p.x, p.y, -depth});
            } else {
                bottom[j * stride + i] = top[j * stride + i];
            }
        }
    }
    std::vector<std::array<int, 3>> faces;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            int t00 = top[j * stride + i], t10 = top[j * stride + i + 1];
            int t01 = top[(j + 1) * stride + i], t11 = top[(j + 1) * stride + i + 1];
            int b00 = bottom[j * stride + i], b10 = bottom[j * stride + i + 1];
            int b01 = bottom[(j + 1) * stride + i], b11 = bottom[(j + 1) * stride + i + 1];
            // The cell diagonal must touch an interior grid point; a rim-to-rim
            // diagonal would be shared between the sheets.
            if (interior(i, j) || interior(i + 1, j + 1)) {
                faces.push_back({t00, t10, t11});
                faces.push_back({t00, t11, t01});
                faces.push_back({b00, b11, b10});
                faces.push_back({b00, b01, b11});
            } else {
                faces.push_back({t00, t10, t01});
                faces.push_back({t10, t11, t01});
                faces.push_back({b00, b01, b10});
                faces.push_back({b10, b01, b11});
            }
        }
    }
    return build_mesh(std::move(verts), std::move(faces));
}

// Index of the top-sheet vertex at grid position (i, j) of flat_pillow(n).
inline int pillow_top_index(int n, int i, int j) {
    // Vertices are emitted row-major; interior grid points emit two vertices.
    int id = 0;
    for (int jj = 0; jj <= n; ++jj) {
        for (int ii = 0; ii <= n; ++ii) {
            if (ii == i && jj == j) return id;
            bool interior = ii > 0 && ii < n && jj > 0 && jj < n;
            id += interior ? 2 : 1;
        }
    }
    return -1;
}

// Axis-aligned unit cube with each of the 6 sides split into n x n quads
// (vertices welded across the creases). Outward orientation.
TriMesh subdivided_cube(int n);

// Uniformly random rotation from a seeded generator.
inline Mat3 random_rotation(std::mt19937& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    double q[4];
    double len = 0.0;
    do {
        len = 0.0;
        for (double& c : q) {
            c = gauss(rng);
            len += c * c;
        }
    } while (len < 1e-12);
    len = std::sqrt(len);
    for (double& c : q) c /= len;
    double w = q[0], x = q[1], y = q[2], z = q[3];
    Mat3 R;
    R(0, 0) = 1 - 2 * (y * y + z * z);
    R(0, 1) = 2 * (x * y - w * z);
    R(0, 2) = 2 * (x * z + w * y);
    R(1, 0) = 2 * (x * y + w * z);
    R(1, 1) = 1 - 2 * (x * x + z * z);
    R(1, 2) = 2 * (y * z - w * x);
    R(2, 0) = 2 * (x * z - w * y);
    R(2, 1) = 2 * (y * z + w * x);
    R(2, 2) = 1 - 2 * (x * x + y * y);
    return R;
}

inline TriMesh transformed(const TriMesh& mesh, const Mat3& R, const Vec3& t = {},
                           double scale = 1.0) {
    std::vector<Vec3> verts(mesh.vertices.size());
    for (size_t i = 0; i < verts.size(); ++i) verts[i] = R.apply(mesh.vertices[i]) * scale + t;
    return build_mesh(std::move(verts), mesh.faces);
}

// Dense symmetric solve by Gaussian elimination with partial pivoting
// (test-side oracle for small systems).
std::vector<double> dense_solve(std::vector<std::vector<double>> A, std::vector<double> b);

}  // namespace curvkit::testing
