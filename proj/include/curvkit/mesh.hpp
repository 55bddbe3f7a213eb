#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "curvkit/errors.hpp"
#include "curvkit/vec3.hpp"

namespace curvkit {

// Undirected mesh edge with its two incident faces and outward co-normals.
struct EdgeAdjacency {
    int v0 = -1, v1 = -1;      // endpoint vertex indices, v0 < v1
    int face[2] = {-1, -1};    // incident faces
    double length = 0.0;
    // Unit vector in face k's plane, orthogonal to the edge, pointing out of face k.
    Vec3 conormal[2];
};

// Per-face unit normal, area, and tangent projector P = I - n n^T.
struct FaceFrame {
    Vec3 normal;
    double area = 0.0;
    Mat3 projector() const { return Mat3::identity() - Mat3::outer(normal, normal); }
};

enum class MeshSizeMode { VertexCount, MeanRootArea };

struct MeshSize {
    MeshSizeMode mode;
    double value;
};

// Indexed triangle surface: closed, consistently oriented 2-manifold.
// Immutable after build_mesh; all queries are read-only.
class TriMesh {
public:
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> faces;

    int n_vertices() const { return static_cast<int>(vertices.size()); }
    int n_faces() const { return static_cast<int>(faces.size()); }
    int n_edges() const { return static_cast<int>(edges_.size()); }

    // Undirected edge table (endpoints + incident faces); co-normals not filled here.
    struct Edge {
        int v0, v1;          // v0 < v1
        int face[2];
    };
    const std::vector<Edge>& edges() const { return edges_; }

    // Edge lookup by endpoints; -1 if absent.
    int find_edge(int a, int b) const;

    // The three undirected-edge ids of face f, opposite local corner 0,1,2 resp.
    std::array<int, 3> face_edges(int f) const;

    Vec3 face_centroid(int f) const {
        const auto& fc = faces[f];
        return (vertices[fc[0]] + vertices[fc[1]] + vertices[fc[2]]) / 3.0;
    }

    int euler_characteristic() const { return n_vertices() - n_edges() + n_faces(); }

private:
    friend TriMesh build_mesh(std::vector<Vec3> vertices, std::vector<std::array<int, 3>> faces);
    std::vector<Edge> edges_;
    std::vector<int> edge_lookup_heads_;   // hash buckets over sorted endpoint pairs
    std::vector<int> edge_lookup_next_;
    void build_edge_lookup();
};

// Validates and indexes a closed oriented triangle surface.
// Throws MeshError on non-manifold edges, inconsistent orientation, degenerate
// faces (area < 1e-14 * longest_edge^2), or bad indices.
TriMesh build_mesh(std::vector<Vec3> vertices, std::vector<std::array<int, 3>> faces);

std::vector<FaceFrame> face_frames(const TriMesh& mesh);

// One entry per undirected edge, with exterior co-normals for both incident faces.
std::vector<EdgeAdjacency> edge_adjacency(const TriMesh& mesh);

// VertexCount: h = 1/sqrt(N_v);  MeanRootArea: h = (sum_K sqrt(A_K)) / N_e.
MeshSize mesh_size(const TriMesh& mesh, MeshSizeMode mode);

double min_corner_angle(const TriMesh& mesh);

// Signed enclosed volume (divergence theorem); positive for outward orientation.
double signed_volume(const TriMesh& mesh);

// Torus level set (R - sqrt(x^2+y^2))^2 + a z^2 = r^2, sampled on an n_u x n_v
// parametric grid with alternating quad diagonals. jitter > 0 perturbs the two
// parameters of every vertex by uniform noise of amplitude jitter*step (seeded),
// which is how the unstructured meshes for the studies are produced. Vertices
// satisfy the level-set equation to machine precision either way.
TriMesh generate_torus(double R, double r, double a, int n_u, int n_v,
                       double jitter = 0.0, unsigned seed = 0);

// Icosahedron subdivided `subdivisions` times, vertices projected to the sphere.
TriMesh generate_icosphere(double radius, int subdivisions);

class ImplicitSurface;

// Mesher-like unstructured torus for the vertex-normal studies: the parametric
// grid is jittered, a seeded fraction of edges may be flipped, and tangential
// smoothing with exact reprojection evens out the vertex distribution.
// Deterministic in the seed.
TriMesh generate_unstructured_torus(double R, double r, double a, int n_u, int n_v,
                                    unsigned seed = 0, double jitter = 0.3,
                                    double flip_fraction = 0.0, int smoothing_rounds = 3);

// Self-similar irregular torus for the curvature studies: every other
// parameter row is phase-shifted (a brick-wall pattern that refinement never
// smooths out) on top of seeded jitter. This family keeps the local asymmetry
// that makes the unstabilized curvature projection stall, which the smoothed
// family averages away.
TriMesh generate_patterned_torus(double R, double r, double a, int n_u, int n_v,
                                 unsigned seed = 0, double row_shift = 0.3,
                                 double jitter = 0.15);

// CCW-ordered 1-ring connectivity around each vertex of a closed mesh.
// neighbors[k] -> neighbors[k+1] spans incident face faces[k] (indices wrap).
struct OneRing {
    std::vector<int> neighbors;  // CCW w.r.t. the outward normal
    std::vector<int> faces;      // faces[k] = face (center, neighbors[k], neighbors[k+1])
};

std::vector<OneRing> build_one_rings(const TriMesh& mesh);

}  // namespace curvkit
