#pragma once

#include "curvkit/fem.hpp"
#include "curvkit/implicit.hpp"
#include "curvkit/norms.hpp"

namespace curvkit {

// Vertex-normal error as a function of the stabilization factor. Assembled
// operators, the projection rhs, and the exact normals are cached, so each
// probe costs one conjugate-gradient solve per component.
class NormalErrorOfGamma {
public:
    NormalErrorOfGamma(const TriMesh& mesh, const ImplicitSurface& surface,
                       StabilizationParams params = {});
    double operator()(double gamma_n) const;

private:
    const TriMesh& mesh_;
    FemOperators ops_;
    NodalField3 exact_;
    StabilizationParams params_;
    mutable NodalField3 cache_;  // last raw solution, reused as a warm start
};

// Mean-curvature error as a function of gamma_H. The normal field entering the
// scalar curvature (H . n)/2 is solved once with params.gamma_n and reused.
class CurvatureErrorOfGamma {
public:
    CurvatureErrorOfGamma(const TriMesh& mesh, const ImplicitSurface& surface,
                          StabilizationParams params = {});
    double operator()(double gamma_h) const;

private:
    const TriMesh& mesh_;
    const ImplicitSurface& surface_;
    FemOperators ops_;
    NodalField3 normals_;
    StabilizationParams params_;
    mutable NodalField3 cache_;
};

}  // namespace curvkit
