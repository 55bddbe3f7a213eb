#include "curvkit/gamma_search.hpp"

namespace curvkit {

NormalErrorOfGamma::NormalErrorOfGamma(const TriMesh& mesh, const ImplicitSurface& surface,
                                       StabilizationParams params)
    : mesh_(mesh),
      ops_(assemble_operators(mesh)),
      exact_(exact_vertex_normals(mesh, surface)),
      params_(params) {}

double NormalErrorOfGamma::operator()(double gamma_n) const {
    StabilizationParams p = params_;
    p.gamma_n = gamma_n;
    // Successive probes lie close in gamma, so the previous raw solution is an
    // excellent initial guess.
    NodalField3 raw =
        projected_normals_raw(mesh_, ops_, p, cache_.empty() ? nullptr : &cache_);
    cache_ = raw;
    return normal_error(mesh_, ops_.frames, normalized_field(raw), exact_);
}

CurvatureErrorOfGamma::CurvatureErrorOfGamma(const TriMesh& mesh, const ImplicitSurface& surface,
                                             StabilizationParams params)
    : mesh_(mesh),
      surface_(surface),
      ops_(assemble_operators(mesh)),
      normals_(projected_normals(mesh, ops_, params)),
      params_(params) {}

double CurvatureErrorOfGamma::operator()(double gamma_h) const {
    StabilizationParams p = params_;
    p.gamma_h = gamma_h;
    NodalField3 H = curvature_vector_warm(mesh_, ops_, p, cache_.empty() ? nullptr : &cache_);
    cache_ = H;
    return curvature_error(mesh_, scalar_curvature(H, normals_), surface_);
}

}  // namespace curvkit
