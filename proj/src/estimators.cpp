#include "curvkit/estimators.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <set>

#include "curvkit/parallel.hpp"

namespace curvkit {

const char* scheme_name(NormalScheme scheme) {
    switch (scheme) {
        case NormalScheme::MWE: return "MWE";
        case NormalScheme::MWA: return "MWA";
        case NormalScheme::MWSELR: return "MWSELR";
        case NormalScheme::MWAAT: return "MWAAT";
        case NormalScheme::MWELR: return "MWELR";
        case NormalScheme::MWRELR: return "MWRELR";
        case NormalScheme::DLLB: return "DLLB";
    }
    return "?";
}

namespace {

double wedge_angle(const Vec3& e0, const Vec3& e1) {
    double c = dot(e0, e1) / (norm(e0) * norm(e1));
    return std::acos(std::clamp(c, -1.0, 1.0));
}

Vec3 mean_face_normal(const TriMesh& mesh, const std::vector<FaceFrame>& frames,
                      const OneRing& ring) {
    Vec3 sum{};
    for (int f : ring.faces) sum += frames[f].normal;
    (void)mesh;
    return normalized(sum);
}

}  // namespace

NodalField3 weighted_vertex_normals(const TriMesh& mesh, const std::vector<OneRing>& rings,
                                    NormalScheme scheme, int* fallback_count) {
    if (scheme == NormalScheme::DLLB) {
        if (fallback_count) *fallback_count = 0;
        return dllb(mesh, rings).normals;
    }

    const auto frames = face_frames(mesh);
    NodalField3 out(mesh.n_vertices());
    std::atomic<int> fallbacks{0};

    parallel_for(mesh.n_vertices(), [&](int begin, int end) {
        for (int v = begin; v < end; ++v) {
            const OneRing& ring = rings[v];
            const size_t n = ring.neighbors.size();
            Vec3 sum{};
            for (size_t k = 0; k < n; ++k) {
                int f = ring.faces[k];
                Vec3 e0 = mesh.vertices[ring.neighbors[k]] - mesh.vertices[v];
                Vec3 e1 = mesh.vertices[ring.neighbors[(k + 1) % n]] - mesh.vertices[v];
                double w = 1.0;
                switch (scheme) {
                    case NormalScheme::MWE:
                        break;
                    case NormalScheme::MWA:
                        w = wedge_angle(e0, e1);
                        break;
                    case NormalScheme::MWSELR:
                        w = std::sin(wedge_angle(e0, e1)) / (norm(e0) * norm(e1));
                        break;
                    case NormalScheme::MWAAT:
                        w = norm(cross(e0, e1));
                        break;
                    case NormalScheme::MWELR:
                        w = 1.0 / (norm(e0) * norm(e1));
                        break;
                    case NormalScheme::MWRELR:
                        w = 1.0 / std::sqrt(norm(e0) * norm(e1));
                        break;
                    case NormalScheme::DLLB:
                        break;
                }
                sum += frames[f].normal * w;
            }
            if (norm(sum) < 1e-14) {
                fallbacks++;
                sum = {};
                for (int f : ring.faces) sum += frames[f].normal;
            }
            out[v] = normalized(sum);
        }
    });
    if (fallback_count) *fallback_count = fallbacks.load();
    return out;
}

std::vector<double> mixed_voronoi_areas(const TriMesh& mesh) {
    std::vector<double> areas(mesh.n_vertices(), 0.0);
    for (const auto& fc : mesh.faces) {
        const Vec3& p0 = mesh.vertices[fc[0]];
        const Vec3& p1 = mesh.vertices[fc[1]];
        const Vec3& p2 = mesh.vertices[fc[2]];
        double area = 0.5 * norm(cross(p1 - p0, p2 - p0));

        double ang[3];
        const Vec3* p[3] = {&p0, &p1, &p2};
        for (int c = 0; c < 3; ++c)
            ang[c] = wedge_angle(*p[(c + 1) % 3] - *p[c], *p[(c + 2) % 3] - *p[c]);

        int obtuse = -1;
        for (int c = 0; c < 3; ++c)
            if (ang[c] > 1.5707963267948966) obtuse = c;

        if (obtuse < 0) {
            // Voronoi split: corner c gets (|e_left|^2 cot(angle across) + ...)/8.
            for (int c = 0; c < 3; ++c) {
                double l_next = norm2(*p[(c + 1) % 3] - *p[c]);
                double l_prev = norm2(*p[(c + 2) % 3] - *p[c]);
                areas[fc[c]] +=
                    (l_next / std::tan(ang[(c + 2) % 3]) + l_prev / std::tan(ang[(c + 1) % 3])) /
                    8.0;
            }
        } else {
            for (int c = 0; c < 3; ++c)
                areas[fc[c]] += (c == obtuse) ? area / 2.0 : area / 4.0;
        }
    }
    return areas;
}

DllbResult dllb(const TriMesh& mesh, const std::vector<OneRing>& rings,
                VertexAreaMode area_mode) {
    const auto frames = face_frames(mesh);
    const int nv = mesh.n_vertices();

    std::vector<double> vertex_area(nv, 0.0);
    if (area_mode == VertexAreaMode::MixedVoronoi) {
        vertex_area = mixed_voronoi_areas(mesh);
    } else {
        for (int f = 0; f < mesh.n_faces(); ++f)
            for (int c = 0; c < 3; ++c) vertex_area[mesh.faces[f][c]] += frames[f].area / 3.0;
    }

    DllbResult result;
    result.curvature_vectors.resize(nv);
    result.mean_curvature.resize(nv);
    result.normals.resize(nv);

    parallel_for(nv, [&](int begin, int end) {
        for (int v = begin; v < end; ++v) {
            const OneRing& ring = rings[v];
            const size_t n = ring.neighbors.size();
            Vec3 sum{};
            double mean_edge = 0.0;
            for (size_t k = 0; k < n; ++k) {
                int j = ring.neighbors[k];
                // The edge (v, j) lies in ring.faces[k-1] and ring.faces[k];
                // the opposite corners are the previous and next ring neighbors.
                int prev = ring.neighbors[(k + n - 1) % n];
                int next = ring.neighbors[(k + 1) % n];
                Vec3 xv = mesh.vertices[v], xj = mesh.vertices[j];
                Vec3 xp = mesh.vertices[prev], xn = mesh.vertices[next];
                double alpha = wedge_angle(xv - xn, xj - xn);
                double beta = wedge_angle(xv - xp, xj - xp);
                double cot = 1.0 / std::tan(alpha) + 1.0 / std::tan(beta);
                sum += (xv - xj) * cot;
                mean_edge += norm(xj - xv);
            }
            mean_edge /= static_cast<double>(n);
            Vec3 K = sum / (2.0 * vertex_area[v]);
            result.curvature_vectors[v] = K;
            result.mean_curvature[v] = 0.5 * norm(K);
            if (norm(K) < 1e-10 / mean_edge) {
                result.normals[v] = mean_face_normal(mesh, frames, ring);
            } else {
                result.normals[v] = normalized(K);
            }
        }
    });
    return result;
}

namespace {

// Least squares for f = (a u^2 + 2 b u v + c v^2)/2 through 3x3 normal
// equations; returns false when the system is numerically rank-deficient.
bool fit_quadratic(const std::vector<std::array<double, 3>>& rows,
                   const std::vector<double>& heights, double coeff[3]) {
    double ata[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
    double atb[3] = {0, 0, 0};
    for (size_t r = 0; r < rows.size(); ++r) {
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) ata[i][j] += rows[r][i] * rows[r][j];
            atb[i] += rows[r][i] * heights[r];
        }
    }
    double scale = 0.0;
    for (int i = 0; i < 3; ++i) scale = std::max(scale, std::abs(ata[i][i]));
    if (scale == 0.0) return false;

    // Cholesky with a relative pivot floor (rows are pre-normalized to O(1)).
    double L[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = ata[i][j];
            for (int k = 0; k < j; ++k) s -= L[i][k] * L[j][k];
            if (i == j) {
                if (s < 1e-10 * scale) return false;
                L[i][i] = std::sqrt(s);
            } else {
                L[i][j] = s / L[j][j];
            }
        }
    }
    double y[3];
    for (int i = 0; i < 3; ++i) {
        double s = atb[i];
        for (int k = 0; k < i; ++k) s -= L[i][k] * y[k];
        y[i] = s / L[i][i];
    }
    for (int i = 2; i >= 0; --i) {
        double s = y[i];
        for (int k = i + 1; k < 3; ++k) s -= L[k][i] * coeff[k];
        coeff[i] = s / L[i][i];
    }
    return true;
}

}  // namespace

SsfResult ssf_curvature(const TriMesh& mesh, const std::vector<OneRing>& rings,
                        const NodalField3& frame_normals) {
    const int nv = mesh.n_vertices();
    SsfResult result;
    result.mean_curvature.assign(nv, 0.0);
    result.valid.assign(nv, 1);
    std::atomic<int> invalid{0};

    parallel_for(nv, [&](int begin, int end) {
        for (int v = begin; v < end; ++v) {
            const OneRing& ring = rings[v];
            const Vec3& n = frame_normals[v];
            const Vec3& center = mesh.vertices[v];

            // Tangent frame anchored in the first incident edge.
            Vec3 first_edge = mesh.vertices[ring.neighbors[0]] - center;
            Vec3 u_axis = first_edge - n * dot(first_edge, n);
            double ulen = norm(u_axis);
            if (ulen < 1e-14 * norm(first_edge)) {
                // Edge parallel to the normal; take any other neighbor.
                for (size_t k = 1; k < ring.neighbors.size() && ulen < 1e-14; ++k) {
                    first_edge = mesh.vertices[ring.neighbors[k]] - center;
                    u_axis = first_edge - n * dot(first_edge, n);
                    ulen = norm(u_axis);
                }
            }
            u_axis = u_axis / ulen;
            Vec3 v_axis = cross(n, u_axis);

            // Normalize the fit by the ring radius; the coefficients scale back
            // by 1/ell and the pivot threshold becomes meaningful.
            double ell = 0.0;
            for (int j : ring.neighbors) ell += norm(mesh.vertices[j] - center);
            ell /= static_cast<double>(ring.neighbors.size());

            auto collect = [&](const std::vector<int>& nbrs,
                               std::vector<std::array<double, 3>>& rows,
                               std::vector<double>& heights) {
                for (int j : nbrs) {
                    Vec3 d = (mesh.vertices[j] - center) / ell;
                    double uu = dot(d, u_axis), vv = dot(d, v_axis);
                    rows.push_back({0.5 * uu * uu, uu * vv, 0.5 * vv * vv});
                    heights.push_back(dot(d, n));
                }
            };

            std::vector<std::array<double, 3>> rows;
            std::vector<double> heights;
            collect(ring.neighbors, rows, heights);

            double coeff[3];
            bool ok = rows.size() >= 3 && fit_quadratic(rows, heights, coeff);
            if (!ok) {
                // Enlarge to the 2-ring.
                std::set<int> two_ring(ring.neighbors.begin(), ring.neighbors.end());
                for (int j : ring.neighbors)
                    for (int jj : rings[j].neighbors)
                        if (jj != v) two_ring.insert(jj);
                rows.clear();
                heights.clear();
                collect(std::vector<int>(two_ring.begin(), two_ring.end()), rows, heights);
                ok = rows.size() >= 3 && fit_quadratic(rows, heights, coeff);
            }
            if (!ok) {
                result.valid[v] = 0;
                invalid++;
                continue;
            }
            // div(n) convention: a sphere with outward frame normals curves away
            // from n, so flip the fitted trace.
            result.mean_curvature[v] = -0.5 * (coeff[0] + coeff[2]) / ell;
        }
    });
    result.invalid_count = invalid.load();
    return result;
}

}  // namespace curvkit
