#include "curvkit/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>
#include <unordered_map>

#include "curvkit/implicit.hpp"

namespace curvkit {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Portable uniform double in [-1, 1): mt19937 output is pinned by the
// standard, the distribution adapters are not.
double uniform_pm1(std::mt19937& rng) {
    return static_cast<double>(rng()) * (2.0 / 4294967296.0) - 1.0;
}

uint64_t edge_key(int a, int b) {
    if (a > b) std::swap(a, b);
    return (static_cast<uint64_t>(a) << 32) | static_cast<uint32_t>(b);
}

}  // namespace

void TriMesh::build_edge_lookup() {
    size_t buckets = std::max<size_t>(16, edges_.size() * 2);
    // power of two for cheap masking
    size_t cap = 16;
    while (cap < buckets) cap <<= 1;
    edge_lookup_heads_.assign(cap, -1);
    edge_lookup_next_.assign(edges_.size(), -1);
    for (size_t e = 0; e < edges_.size(); ++e) {
        uint64_t key = edge_key(edges_[e].v0, edges_[e].v1);
        size_t slot = (key * 0x9E3779B97F4A7C15ull >> 17) & (cap - 1);
        edge_lookup_next_[e] = edge_lookup_heads_[slot];
        edge_lookup_heads_[slot] = static_cast<int>(e);
    }
}

int TriMesh::find_edge(int a, int b) const {
    if (a > b) std::swap(a, b);
    uint64_t key = edge_key(a, b);
    size_t cap = edge_lookup_heads_.size();
    size_t slot = (key * 0x9E3779B97F4A7C15ull >> 17) & (cap - 1);
    for (int e = edge_lookup_heads_[slot]; e >= 0; e = edge_lookup_next_[e]) {
        if (edges_[e].v0 == a && edges_[e].v1 == b) return e;
    }
    return -1;
}

std::array<int, 3> TriMesh::face_edges(int f) const {
    const auto& fc = faces[f];
    return {find_edge(fc[1], fc[2]), find_edge(fc[2], fc[0]), find_edge(fc[0], fc[1])};
}

TriMesh build_mesh(std::vector<Vec3> vertices, std::vector<std::array<int, 3>> faces) {
    if (vertices.empty() || faces.empty())
        throw MeshError(MeshError::Code::Invalid, "empty vertex or face list");

    const int nv = static_cast<int>(vertices.size());
    for (size_t f = 0; f < faces.size(); ++f) {
        const auto& fc = faces[f];
        for (int c = 0; c < 3; ++c) {
            if (fc[c] < 0 || fc[c] >= nv)
                throw MeshError(MeshError::Code::IndexOutOfRange,
                                "face " + std::to_string(f) + " references vertex " +
                                    std::to_string(fc[c]));
        }
        if (fc[0] == fc[1] || fc[1] == fc[2] || fc[2] == fc[0])
            throw MeshError(MeshError::Code::IndexOutOfRange,
                            "face " + std::to_string(f) + " repeats a vertex index");

        Vec3 e01 = vertices[fc[1]] - vertices[fc[0]];
        Vec3 e02 = vertices[fc[2]] - vertices[fc[0]];
        Vec3 e12 = vertices[fc[2]] - vertices[fc[1]];
        double area = 0.5 * norm(cross(e01, e02));
        double lmax2 = std::max({norm2(e01), norm2(e02), norm2(e12)});
        if (area < 1e-14 * lmax2)
            throw MeshError(MeshError::Code::DegenerateFace,
                            "face " + std::to_string(f) + " has vanishing area");
    }

    // Directed half-edge map: (i,j) -> face. Each directed edge must appear once,
    // and its reverse exactly once, for a consistently oriented closed surface.
    std::unordered_map<uint64_t, std::pair<int, int>> undirected;  // key -> (count, first face)
    undirected.reserve(faces.size() * 2);
    std::unordered_map<uint64_t, int> directed;  // (i<<32|j) -> face
    directed.reserve(faces.size() * 3);

    auto dir_key = [](int i, int j) {
        return (static_cast<uint64_t>(i) << 32) | static_cast<uint32_t>(j);
    };

    for (size_t f = 0; f < faces.size(); ++f) {
        const auto& fc = faces[f];
        for (int c = 0; c < 3; ++c) {
            int i = fc[c], j = fc[(c + 1) % 3];
            if (!directed.emplace(dir_key(i, j), static_cast<int>(f)).second)
                throw MeshError(MeshError::Code::InconsistentOrientation,
                                "directed edge (" + std::to_string(i) + "," + std::to_string(j) +
                                    ") appears twice");
        }
    }

    TriMesh mesh;
    std::map<uint64_t, TriMesh::Edge> edge_map;  // ordered: deterministic edge ids
    for (size_t f = 0; f < faces.size(); ++f) {
        const auto& fc = faces[f];
        for (int c = 0; c < 3; ++c) {
            int i = fc[c], j = fc[(c + 1) % 3];
            uint64_t key = edge_key(i, j);
            auto it = edge_map.find(key);
            if (it == edge_map.end()) {
                edge_map[key] = {std::min(i, j), std::max(i, j), {static_cast<int>(f), -1}};
            } else {
                if (it->second.face[1] != -1)
                    throw MeshError(MeshError::Code::NonManifoldEdge,
                                    "edge (" + std::to_string(i) + "," + std::to_string(j) +
                                        ") has more than 2 incident faces");
                it->second.face[1] = static_cast<int>(f);
            }
        }
    }
    for (auto& [key, e] : edge_map) {
        if (e.face[1] == -1)
            throw MeshError(MeshError::Code::NonManifoldEdge,
                            "boundary edge (" + std::to_string(e.v0) + "," +
                                std::to_string(e.v1) + "): surface is not closed");
        // Orientation: (v0,v1) must appear in exactly one of the two faces,
        // (v1,v0) in the other.
        bool fwd = directed.count(dir_key(e.v0, e.v1)) > 0;
        bool rev = directed.count(dir_key(e.v1, e.v0)) > 0;
        if (!fwd || !rev)
            throw MeshError(MeshError::Code::InconsistentOrientation,
                            "edge (" + std::to_string(e.v0) + "," + std::to_string(e.v1) +
                                ") traversed twice in the same direction");
    }

    mesh.vertices = std::move(vertices);
    mesh.faces = std::move(faces);
    mesh.edges_.reserve(edge_map.size());
    for (auto& [key, e] : edge_map) mesh.edges_.push_back(e);
    mesh.build_edge_lookup();
    return mesh;
}

std::vector<FaceFrame> face_frames(const TriMesh& mesh) {
    std::vector<FaceFrame> frames(mesh.n_faces());
    for (int f = 0; f < mesh.n_faces(); ++f) {
        const auto& fc = mesh.faces[f];
        Vec3 c = cross(mesh.vertices[fc[1]] - mesh.vertices[fc[0]],
                       mesh.vertices[fc[2]] - mesh.vertices[fc[0]]);
        double len = norm(c);
        if (len <= 0.0)
            throw MeshError(MeshError::Code::DegenerateFace,
                            "face " + std::to_string(f) + " has zero normal");
        frames[f].normal = c / len;
        frames[f].area = 0.5 * len;
    }
    return frames;
}

std::vector<EdgeAdjacency> edge_adjacency(const TriMesh& mesh) {
    std::vector<EdgeAdjacency> adj(mesh.n_edges());
    for (int e = 0; e < mesh.n_edges(); ++e) {
        const auto& edge = mesh.edges()[e];
        EdgeAdjacency& a = adj[e];
        a.v0 = edge.v0;
        a.v1 = edge.v1;
        a.face[0] = edge.face[0];
        a.face[1] = edge.face[1];
        Vec3 ev = mesh.vertices[edge.v1] - mesh.vertices[edge.v0];
        a.length = norm(ev);
        Vec3 edir = ev / a.length;
        for (int s = 0; s < 2; ++s) {
            int f = edge.face[s];
            const auto& fc = mesh.faces[f];
            int opp = -1;
            for (int c = 0; c < 3; ++c)
                if (fc[c] != edge.v0 && fc[c] != edge.v1) opp = fc[c];
            // In-plane direction orthogonal to the edge, pointing away from the
            // opposite vertex (exterior to the face).
            Vec3 to_opp = mesh.vertices[opp] - mesh.vertices[edge.v0];
            Vec3 inplane = to_opp - edir * dot(to_opp, edir);
            a.conormal[s] = normalized(inplane) * -1.0;
        }
    }
    return adj;
}

MeshSize mesh_size(const TriMesh& mesh, MeshSizeMode mode) {
    if (mode == MeshSizeMode::VertexCount)
        return {mode, 1.0 / std::sqrt(static_cast<double>(mesh.n_vertices()))};
    double sum = 0.0;
    for (int f = 0; f < mesh.n_faces(); ++f) {
        const auto& fc = mesh.faces[f];
        Vec3 c = cross(mesh.vertices[fc[1]] - mesh.vertices[fc[0]],
                       mesh.vertices[fc[2]] - mesh.vertices[fc[0]]);
        sum += std::sqrt(0.5 * norm(c));
    }
    return {mode, sum / mesh.n_faces()};
}

double min_corner_angle(const TriMesh& mesh) {
    double best = kPi;
    for (const auto& fc : mesh.faces) {
        for (int c = 0; c < 3; ++c) {
            Vec3 u = mesh.vertices[fc[(c + 1) % 3]] - mesh.vertices[fc[c]];
            Vec3 v = mesh.vertices[fc[(c + 2) % 3]] - mesh.vertices[fc[c]];
            double cosang = dot(u, v) / (norm(u) * norm(v));
            best = std::min(best, std::acos(std::clamp(cosang, -1.0, 1.0)));
        }
    }
    return best;
}

double signed_volume(const TriMesh& mesh) {
    double vol = 0.0;
    for (const auto& fc : mesh.faces)
        vol += dot(cross(mesh.vertices[fc[0]], mesh.vertices[fc[1]]), mesh.vertices[fc[2]]);
    return vol / 6.0;
}

namespace {

TriMesh torus_grid(double R, double r, double a, int n_u, int n_v, double jitter, unsigned seed,
                   double row_shift) {
    if (!(R > r && r > 0.0) || !(a > 0.0) || n_u < 3 || n_v < 3 || jitter < 0.0 || jitter >= 0.5)
        throw InvalidParameter(
            "generate_torus: need R > r > 0, a > 0, n_u,n_v >= 3, jitter in [0,0.5)");

    const double du = 2.0 * kPi / n_u;  // angle around the main axis
    const double dv = 2.0 * kPi / n_v;  // angle around the tube
    const double inv_sqrt_a = 1.0 / std::sqrt(a);

    std::mt19937 rng(seed);

    std::vector<Vec3> verts(static_cast<size_t>(n_u) * n_v);
    for (int i = 0; i < n_u; ++i) {
        for (int j = 0; j < n_v; ++j) {
            double phi = i * du + ((j % 2) ? row_shift * du : 0.0);
            double theta = j * dv;
            if (jitter > 0.0) {
                phi += jitter * du * uniform_pm1(rng);
                theta += jitter * dv * uniform_pm1(rng);
            }
            double ring = R + r * std::cos(theta);
            verts[static_cast<size_t>(i) * n_v + j] = {ring * std::cos(phi),
                                                       ring * std::sin(phi),
                                                       r * std::sin(theta) * inv_sqrt_a};
        }
    }

    std::vector<std::array<int, 3>> faces;
    faces.reserve(static_cast<size_t>(2) * n_u * n_v);
    auto idx = [&](int i, int j) { return ((i % n_u) * n_v) + (j % n_v); };
    for (int i = 0; i < n_u; ++i) {
        for (int j = 0; j < n_v; ++j) {
            int v00 = idx(i, j), v10 = idx(i + 1, j), v11 = idx(i + 1, j + 1), v01 = idx(i, j + 1);
            if ((i + j) % 2 == 0) {
                faces.push_back({v00, v10, v11});
                faces.push_back({v00, v11, v01});
            } else {
                faces.push_back({v00, v10, v01});
                faces.push_back({v10, v11, v01});
            }
        }
    }
    return build_mesh(std::move(verts), std::move(faces));
}

}  // namespace

TriMesh generate_torus(double R, double r, double a, int n_u, int n_v, double jitter,
                       unsigned seed) {
    return torus_grid(R, r, a, n_u, n_v, jitter, seed, 0.0);
}

TriMesh generate_patterned_torus(double R, double r, double a, int n_u, int n_v, unsigned seed,
                                 double row_shift, double jitter) {
    return torus_grid(R, r, a, n_u, n_v, jitter, seed, row_shift);
}

TriMesh generate_icosphere(double radius, int subdivisions) {
    if (radius <= 0.0 || subdivisions < 0)
        throw InvalidParameter("generate_icosphere: radius > 0, subdivisions >= 0");

    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vec3> verts = {
        {-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0},
        {0, -1, t}, {0, 1, t}, {0, -1, -t}, {0, 1, -t},
        {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1},
    };
    std::vector<std::array<int, 3>> faces = {
        {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
        {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
        {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
        {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1},
    };

    for (int s = 0; s < subdivisions; ++s) {
        std::map<uint64_t, int> midpoints;
        auto midpoint = [&](int a, int b) {
            uint64_t key = edge_key(a, b);
            auto it = midpoints.find(key);
            if (it != midpoints.end()) return it->second;
            int id = static_cast<int>(verts.size());
            verts.push_back((verts[a] + verts[b]) * 0.5);
            midpoints[key] = id;
            return id;
        };
        std::vector<std::array<int, 3>> next;
        next.reserve(faces.size() * 4);
        for (const auto& fc : faces) {
            int m01 = midpoint(fc[0], fc[1]);
            int m12 = midpoint(fc[1], fc[2]);
            int m20 = midpoint(fc[2], fc[0]);
            next.push_back({fc[0], m01, m20});
            next.push_back({m01, fc[1], m12});
            next.push_back({m20, m12, fc[2]});
            next.push_back({m01, m12, m20});
        }
        faces = std::move(next);
    }

    for (auto& v : verts) v = normalized(v) * radius;
    return build_mesh(std::move(verts), std::move(faces));
}

namespace {

// Flip edge (a,b) shared by (a,b,c) and (b,a,d) into (c,d) when the result is
// manifold-safe and keeps reasonable element quality.
bool try_flip(std::vector<std::array<int, 3>>& faces, const std::vector<Vec3>& verts, int f1,
              int f2, std::map<uint64_t, int>& edge_use) {
    // locate the shared edge
    int a = -1, b = -1;
    for (int u : faces[f1]) {
        for (int v : faces[f2]) {
            if (u != v) continue;
            if (a < 0)
                a = u;
            else if (u != a)
                b = u;
        }
    }
    if (b < 0) return false;
    auto opposite = [&](const std::array<int, 3>& f) {
        for (int v : f)
            if (v != a && v != b) return v;
        return -1;
    };
    int c = opposite(faces[f1]);
    int d = opposite(faces[f2]);
    if (edge_use.count(edge_key(c, d))) return false;  // diagonal already an edge

    // Orient: f1 must traverse a->b, f2 must traverse b->a.
    auto traverses = [&](const std::array<int, 3>& f, int u, int v) {
        for (int k = 0; k < 3; ++k)
            if (f[k] == u && f[(k + 1) % 3] == v) return true;
        return false;
    };
    if (!traverses(faces[f1], a, b)) {
        std::swap(a, b);
        std::swap(c, d);
    }
    std::array<int, 3> n1 = {a, d, c};
    std::array<int, 3> n2 = {b, c, d};

    // reject degenerate or folded results
    auto face_normal_area = [&](const std::array<int, 3>& f, Vec3& n) {
        Vec3 cr = cross(verts[f[1]] - verts[f[0]], verts[f[2]] - verts[f[0]]);
        double area = 0.5 * norm(cr);
        if (area > 0.0) n = cr / (2.0 * area);
        return area;
    };
    Vec3 o1, o2, m1, m2;
    double oa1 = face_normal_area(faces[f1], o1), oa2 = face_normal_area(faces[f2], o2);
    double na1 = face_normal_area(n1, m1), na2 = face_normal_area(n2, m2);
    double lmax2 = std::max(norm2(verts[c] - verts[d]), norm2(verts[a] - verts[b]));
    if (na1 < 1e-6 * lmax2 || na2 < 1e-6 * lmax2) return false;
    Vec3 old_avg = normalized(o1 * oa1 + o2 * oa2);
    if (dot(m1, old_avg) < 0.5 || dot(m2, old_avg) < 0.5) return false;

    edge_use.erase(edge_key(a, b));
    edge_use[edge_key(c, d)] = 1;
    faces[f1] = n1;
    faces[f2] = n2;
    return true;
}

}  // namespace

TriMesh generate_unstructured_torus(double R, double r, double a, int n_u, int n_v,
                                    unsigned seed, double jitter, double flip_fraction,
                                    int smoothing_rounds) {
    TriMesh grid = generate_torus(R, r, a, n_u, n_v, jitter, seed);
    std::mt19937 rng(seed ^ 0x9E3779B9u);

    // Random edge flips break the regular valence-6 connectivity.
    std::vector<Vec3> verts = grid.vertices;
    std::vector<std::array<int, 3>> faces = grid.faces;
    std::map<uint64_t, int> edge_use;
    for (const auto& e : grid.edges()) edge_use[edge_key(e.v0, e.v1)] = 1;

    std::vector<std::pair<int, int>> candidates;  // face pairs per edge
    for (const auto& e : grid.edges()) candidates.push_back({e.face[0], e.face[1]});
    // portable Fisher-Yates
    for (size_t k = candidates.size(); k > 1; --k)
        std::swap(candidates[k - 1], candidates[rng() % k]);
    size_t target = static_cast<size_t>(flip_fraction * static_cast<double>(candidates.size()));
    size_t flipped = 0;
    for (const auto& [f1, f2] : candidates) {
        if (flipped >= target) break;
        if (try_flip(faces, verts, f1, f2, edge_use)) ++flipped;
    }

    TriMesh mesh = build_mesh(std::move(verts), std::move(faces));

    // Tangential smoothing with exact reprojection evens out the vertex
    // distribution the way mesh generators do.
    SquishedTorus torus(R, r, a);
    auto rings = build_one_rings(mesh);
    for (int round = 0; round < smoothing_rounds; ++round) {
        std::vector<Vec3> next(mesh.vertices.size());
        for (int v = 0; v < mesh.n_vertices(); ++v) {
            Vec3 centroid{};
            for (int j : rings[v].neighbors) centroid += mesh.vertices[j];
            centroid = centroid / static_cast<double>(rings[v].neighbors.size());
            Vec3 moved = mesh.vertices[v] + (centroid - mesh.vertices[v]) * 0.6;
            next[v] = project_to_surface(torus, moved, 1e-13).position;
        }
        mesh.vertices = std::move(next);
    }
    // Re-validate geometry after smoothing.
    return build_mesh(std::move(mesh.vertices), std::move(mesh.faces));
}

std::vector<OneRing> build_one_rings(const TriMesh& mesh) {
    const int nv = mesh.n_vertices();
    std::vector<OneRing> rings(nv);

    // Per vertex: wedge map first_neighbor -> (second_neighbor, face).
    std::vector<std::vector<std::array<int, 3>>> wedges(nv);
    for (int f = 0; f < mesh.n_faces(); ++f) {
        const auto& fc = mesh.faces[f];
        for (int c = 0; c < 3; ++c)
            wedges[fc[c]].push_back({fc[(c + 1) % 3], fc[(c + 2) % 3], f});
    }

    for (int v = 0; v < nv; ++v) {
        auto& ws = wedges[v];
        if (ws.empty()) continue;
        OneRing& ring = rings[v];
        ring.neighbors.reserve(ws.size());
        ring.faces.reserve(ws.size());
        // Walk the star: each wedge (a -> b) is CCW around the outward normal,
        // so the successor wedge starts at b.
        int start = ws[0][0];
        int cur = start;
        for (size_t step = 0; step < ws.size(); ++step) {
            const std::array<int, 3>* w = nullptr;
            for (const auto& cand : ws)
                if (cand[0] == cur) { w = &cand; break; }
            if (!w)
                throw MeshError(MeshError::Code::Invalid,
                                "vertex " + std::to_string(v) + " has a broken 1-ring");
            ring.neighbors.push_back(cur);
            ring.faces.push_back((*w)[2]);
            cur = (*w)[1];
        }
        if (cur != start)
            throw MeshError(MeshError::Code::Invalid,
                            "vertex " + std::to_string(v) + " 1-ring does not close");
    }
    return rings;
}

}  // namespace curvkit
