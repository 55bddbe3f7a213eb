#pragma once

#include <vector>

#include "curvkit/fem.hpp"
#include "curvkit/mesh.hpp"

namespace curvkit {

// Face-normal weighting schemes for vertex normals, plus the normalized
// cotangent curvature vector (DLLB).
enum class NormalScheme { MWE, MWA, MWSELR, MWAAT, MWELR, MWRELR, DLLB };

const char* scheme_name(NormalScheme scheme);

// Weighted sum of incident face normals, normalized per vertex. A vertex whose
// weighted sum has norm < 1e-14 falls back to the equal-weight sum; the count
// of such vertices is reported through fallback_count when given.
NodalField3 weighted_vertex_normals(const TriMesh& mesh, const std::vector<OneRing>& rings,
                                    NormalScheme scheme, int* fallback_count = nullptr);

enum class VertexAreaMode { Barycentric, MixedVoronoi };

struct DllbResult {
    NodalField3 curvature_vectors;  // K_h = (1/2A_V) sum (cot a + cot b)(x_i - x_j)
    std::vector<double> mean_curvature;  // |K_h|/2
    NodalField3 normals;                 // K_h/|K_h|, mean face normal where K_h ~ 0
};

DllbResult dllb(const TriMesh& mesh, const std::vector<OneRing>& rings,
                VertexAreaMode area_mode = VertexAreaMode::Barycentric);

// Mixed-Voronoi vertex areas (Meyer): Voronoi region for non-obtuse triangles,
// A/2 at the obtuse corner and A/4 elsewhere for obtuse ones. Sums to the mesh area.
std::vector<double> mixed_voronoi_areas(const TriMesh& mesh);

struct SsfResult {
    std::vector<double> mean_curvature;
    std::vector<uint8_t> valid;  // 0 where the fit stayed rank-deficient
    int invalid_count = 0;
};

// Quadratic height fit f(u,v) = (a u^2 + 2 b u v + c v^2)/2 in the tangent frame
// of each vertex (u-axis from the first incident edge, frame normal supplied).
// H = -(a + c)/2, so a sphere with outward normals gets positive curvature.
// Rank-deficient 1-ring fits retry on the 2-ring before being marked invalid.
SsfResult ssf_curvature(const TriMesh& mesh, const std::vector<OneRing>& rings,
                        const NodalField3& frame_normals);

}  // namespace curvkit
