#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "curvkit/fem.hpp"
#include "curvkit/implicit.hpp"
#include "curvkit/mesh.hpp"

namespace curvkit {

// Placement rule for the new vertex on a split edge.
struct Placer {
    enum class Kind {
        LinearMidpoint,   // edge midpoint
        PNSurface,        // PN patch of the canonical owner face at the midpoint parameter
        ExactProjection,  // midpoint projected onto the analytic surface
    };
    Kind kind = Kind::LinearMidpoint;
    const ImplicitSurface* surface = nullptr;  // ExactProjection
    double projection_tol = 1e-12;
    // PNSurface only: parameters for the stabilized normal solve when no
    // precomputed field is passed to red_green_refine.
    StabilizationParams fem;
};

// Mesh plus the green-pair bookkeeping needed for conforming refinement.
// Green children are transitional bisections; before any further refinement
// touches them they are recombined into their parent, which is then red-split.
struct RefineState {
    TriMesh mesh;
    struct GreenPair {
        int child[2];               // current face ids: (a,m,c) and (m,b,c)
        std::array<int, 3> parent;  // (a,b,c), bisected edge (a,b)
        int mid;                    // vertex m on edge (a,b)
    };
    std::vector<GreenPair> greens;
    std::vector<int> green_id;  // per face: index into greens, or -1
};

RefineState make_refine_state(TriMesh mesh);

// eta_K = sqrt( (A_K/3) sum_i |n_h(x_K^i) - n_K|^2 ); the squares sum to the
// squared global indicator ||n_h - n_K||^2.
std::vector<double> error_indicators(const TriMesh& mesh, const std::vector<FaceFrame>& frames,
                                     const NodalField3& n_h);

inline double global_indicator(const std::vector<double>& eta) {
    double s = 0.0;
    for (double e : eta) s += e * e;
    return std::sqrt(s);
}

// One conforming red-green round: marked elements are red-split (4 children via
// edge midpoints), neighbors with one hanging node are green-bisected, with two
// or more promoted to red; touched greens are recombined and red-split. For the
// PNSurface placer, pass the stabilized normals of the current whole mesh (they
// are solved internally when absent).
RefineState red_green_refine(const RefineState& state, const std::vector<int>& marked,
                             const Placer& placer, const NodalField3* normals = nullptr);

struct AdaptiveOptions {
    StabilizationParams fem;  // gamma_n for the indicator normals
    double tol = 0.0;         // stop when the global indicator drops below this
    int max_rounds = 4;
    double theta = 0.5;  // mark K with eta_K >= theta * max eta (maximum strategy)
    Placer placer;
    const ImplicitSurface* surface = nullptr;  // adds eps_geom and effectivity columns
    double projection_tol = 1e-10;
    bool mark_all = false;  // uniform refinement (every element marked)
};

struct AdaptiveRound {
    int round;
    int n_elements;
    double h;  // mean-root-area mesh size
    double indicator;
    double eps_geom = std::nan("");
    double effectivity = std::nan("");
};

struct AdaptiveResult {
    RefineState state;
    std::vector<AdaptiveRound> rounds;  // includes the initial mesh as round 0
};

// Solve normals on the whole mesh, compute indicators, stop or mark and refine.
AdaptiveResult adaptive_loop(TriMesh mesh, const AdaptiveOptions& options);

}  // namespace curvkit
