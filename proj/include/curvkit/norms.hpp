#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "curvkit/fem.hpp"
#include "curvkit/implicit.hpp"
#include "curvkit/mesh.hpp"

namespace curvkit {

// Element samplers: value at corner i (0..2) of face k. A nodal field ignores k;
// a per-face constant (e.g. the face normal) ignores i.
using ScalarSampler = std::function<double(int face, int corner)>;
using VectorSampler = std::function<Vec3(int face, int corner)>;

namespace detail {
inline double squared(double v) { return v * v; }
inline double squared(const Vec3& v) { return norm2(v); }
}  // namespace detail

// Vertex-lumped (Newton-Cotes) approximation of the L2 surface norm:
// sqrt( sum_K (A_K/3) sum_i |v(x_K^i)|^2 ).
template <class Sampler>
double l2h_norm(const TriMesh& mesh, const std::vector<FaceFrame>& frames, Sampler&& sampler) {
    double total = 0.0;
    for (int f = 0; f < mesh.n_faces(); ++f) {
        double s = 0.0;
        for (int c = 0; c < 3; ++c) s += detail::squared(sampler(f, c));
        total += frames[f].area / 3.0 * s;
    }
    return std::sqrt(total);
}

template <class Sampler>
double l2h_norm(const TriMesh& mesh, Sampler&& sampler) {
    return l2h_norm(mesh, face_frames(mesh), std::forward<Sampler>(sampler));
}

// eps = || n_approx - n_exact ||_{L2_h}.
template <class SamplerA, class SamplerB>
double l2h_distance(const TriMesh& mesh, const std::vector<FaceFrame>& frames, SamplerA&& a,
                    SamplerB&& b) {
    return l2h_norm(mesh, frames, [&](int f, int c) { return a(f, c) - b(f, c); });
}

// Exact level-set normals evaluated at the mesh vertices.
NodalField3 exact_vertex_normals(const TriMesh& mesh, const ImplicitSurface& surface);

// Exact mean curvature at the mesh vertices.
std::vector<double> exact_vertex_curvature(const TriMesh& mesh, const ImplicitSurface& surface);

double normal_error(const TriMesh& mesh, const std::vector<FaceFrame>& frames,
                    const NodalField3& approx, const NodalField3& exact);
double normal_error(const TriMesh& mesh, const NodalField3& approx,
                    const ImplicitSurface& surface);

// eps_H = || H_exact - H_approx ||_{L2_h}. Corners whose vertex is flagged
// invalid (valid[i] == 0) are excluded from the sum; pass nullptr for none.
double curvature_error(const TriMesh& mesh, const std::vector<double>& approx,
                       const ImplicitSurface& surface,
                       const std::vector<uint8_t>* valid = nullptr);

// eps_geom: L2_h norm of the vertexwise signed distance to the exact surface
// (or of phi^2 when use_phi_squared is set, the literal variant).
double geom_error(const TriMesh& mesh, const ImplicitSurface& surface,
                  bool use_phi_squared = false, double projection_tol = 1e-10);

// p_n = (log e_{n+1} - log e_n)/(log h_{n+1} - log h_n); one fewer than rows.
std::vector<double> convergence_rates(const std::vector<double>& h,
                                      const std::vector<double>& errors);

// E = ||n_e - n_K|| / ||n_stab - n_K||, both in the lumped norm with the face
// constant n_K sampled per element corner.
double effectivity_index(const TriMesh& mesh, const std::vector<FaceFrame>& frames,
                         const NodalField3& exact_normals, const NodalField3& stabilized);
double effectivity_index(const TriMesh& mesh, const ImplicitSurface& surface,
                         const NodalField3& stabilized);

// (h, error) rows with h strictly decreasing; serializes to CSV with a rate column.
class ConvergenceTable {
public:
    void add_row(double h, double error);
    const std::vector<double>& h() const { return h_; }
    const std::vector<double>& errors() const { return errors_; }
    std::vector<double> rates() const;
    void write_csv(std::ostream& out, const std::string& error_label = "error") const;

private:
    std::vector<double> h_, errors_;
};

}  // namespace curvkit
