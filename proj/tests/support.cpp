#include "support.hpp"

#include <cmath>
#include <map>

namespace curvkit::testing {

TriMesh subdivided_cube(int n) {
    std::vector<Vec3> verts;
    std::map<std::array<long long, 3>, int> welded;
    auto vertex = [&](double x, double y, double z) {
        std::array<long long, 3> key = {std::llround(x * 2 * n), std::llround(y * 2 * n),
                                        std::llround(z * 2 * n)};
        auto it = welded.find(key);
        if (it != welded.end()) return it->second;
        int id = static_cast<int>(verts.size());
        verts.push_back({x, y, z});
        welded[key] = id;
        return id;
    };

    std::vector<std::array<int, 3>> faces;
    // Each side: origin corner plus two in-plane axes with du x dv outward.
    struct Side {
        Vec3 origin, du, dv;
    };
    const Side sides[6] = {
        {{0, 0, 1}, {1, 0, 0}, {0, 1, 0}},  // top (+z): x cross y = +z
        {{0, 0, 0}, {0, 1, 0}, {1, 0, 0}},  // bottom (-z): y cross x = -z
        {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}},  // +x: y cross z = +x
        {{0, 0, 0}, {0, 0, 1}, {0, 1, 0}},  // -x: z cross y = -x
        {{0, 1, 0}, {0, 0, 1}, {1, 0, 0}},  // +y: z cross x = +y
        {{0, 0, 0}, {1, 0, 0}, {0, 0, 1}},  // -y: x cross z = -y
    };
    for (const Side& s : sides) {
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                auto corner = [&](int ii, int jj) {
                    Vec3 p = s.origin + s.du * (static_cast<double>(ii) / n) +
                             s.dv * (static_cast<double>(jj) / n);
                    return vertex(p.x, p.y, p.z);
                };
                int v00 = corner(i, j), v10 = corner(i + 1, j);
                int v01 = corner(i, j + 1), v11 = corner(i + 1, j + 1);
                faces.push_back({v00, v10, v11});
                faces.push_back({v00, v11, v01});
            }
        }
    }
    return build_mesh(std::move(verts), std::move(faces));
}

std::vector<double> dense_solve(std::vector<std::vector<double>> A, std::vector<double> b) {
    const int n = static_cast<int>(b.size());
    for (int k = 0; k < n; ++k) {
        int pivot = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(A[i][k]) > std::abs(A[pivot][k])) pivot = i;
        std::swap(A[k], A[pivot]);
        std::swap(b[k], b[pivot]);
        for (int i = k + 1; i < n; ++i) {
            double f = A[i][k] / A[k][k];
            for (int j = k; j < n; ++j) A[i][j] -= f * A[k][j];
            b[i] -= f * b[k];
        }
    }
    std::vector<double> x(n);
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int j = i + 1; j < n; ++j) s -= A[i][j] * x[j];
        x[i] = s / A[i][i];
    }
    return x;
}

}  // namespace curvkit::testing
