#include "curvkit/norms.hpp"

#include <cmath>
#include <ostream>

namespace curvkit {

NodalField3 exact_vertex_normals(const TriMesh& mesh, const ImplicitSurface& surface) {
    NodalField3 out(mesh.n_vertices());
    for (int i = 0; i < mesh.n_vertices(); ++i) out[i] = exact_normal(surface, mesh.vertices[i]);
    return out;
}

std::vector<double> exact_vertex_curvature(const TriMesh& mesh, const ImplicitSurface& surface) {
    std::vector<double> out(mesh.n_vertices());
    for (int i = 0; i < mesh.n_vertices(); ++i)
        out[i] = exact_mean_curvature(surface, mesh.vertices[i]);
    return out;
}

double normal_error(const TriMesh& mesh, const std::vector<FaceFrame>& frames,
                    const NodalField3& approx, const NodalField3& exact) {
    return l2h_distance(
        mesh, frames, [&](int f, int c) { return approx[mesh.faces[f][c]]; },
        [&](int f, int c) { return exact[mesh.faces[f][c]]; });
}

double normal_error(const TriMesh& mesh, const NodalField3& approx,
                    const ImplicitSurface& surface) {
    return normal_error(mesh, face_frames(mesh), approx, exact_vertex_normals(mesh, surface));
}

double curvature_error(const TriMesh& mesh, const std::vector<double>& approx,
                       const ImplicitSurface& surface, const std::vector<uint8_t>* valid) {
    auto frames = face_frames(mesh);
    auto exact = exact_vertex_curvature(mesh, surface);
    double total = 0.0;
    for (int f = 0; f < mesh.n_faces(); ++f) {
        for (int c = 0; c < 3; ++c) {
            int v = mesh.faces[f][c];
            if (valid && !(*valid)[v]) continue;
            double d = exact[v] - approx[v];
            total += frames[f].area / 3.0 * d * d;
        }
    }
    return std::sqrt(total);
}

double geom_error(const TriMesh& mesh, const ImplicitSurface& surface, bool use_phi_squared,
                  double projection_tol) {
    std::vector<double> values(mesh.n_vertices());
    for (int i = 0; i < mesh.n_vertices(); ++i) {
        values[i] = use_phi_squared
                        ? detail::squared(surface.phi(mesh.vertices[i]))
                        : signed_distance(surface, mesh.vertices[i], projection_tol);
    }
    return l2h_norm(mesh, [&](int f, int c) { return values[mesh.faces[f][c]]; });
}

std::vector<double> convergence_rates(const std::vector<double>& h,
                                      const std::vector<double>& errors) {
    if (h.size() != errors.size() || h.size() < 2)
        throw InvalidParameter("convergence_rates: need at least 2 matching rows");
    std::vector<double> rates;
    rates.reserve(h.size() - 1);
    for (size_t i = 0; i + 1 < h.size(); ++i) {
        if (!(errors[i] > 0.0) || !(errors[i + 1] > 0.0))
            throw NonPositiveError("convergence_rates: errors must be positive");
        rates.push_back((std::log(errors[i + 1]) - std::log(errors[i])) /
                        (std::log(h[i + 1]) - std::log(h[i])));
    }
    return rates;
}

double effectivity_index(const TriMesh& mesh, const std::vector<FaceFrame>& frames,
                         const NodalField3& exact_normals, const NodalField3& stabilized) {
    auto face_const = [&](int f, int) { return frames[f].normal; };
    double denom = l2h_distance(
        mesh, frames, [&](int f, int c) { return stabilized[mesh.faces[f][c]]; }, face_const);
    if (denom < 1e-14)
        throw DivisionByZero("effectivity index: estimated error is numerically zero");
    double numer = l2h_distance(
        mesh, frames, [&](int f, int c) { return exact_normals[mesh.faces[f][c]]; }, face_const);
    return numer / denom;
}

double effectivity_index(const TriMesh& mesh, const ImplicitSurface& surface,
                         const NodalField3& stabilized) {
    return effectivity_index(mesh, face_frames(mesh), exact_vertex_normals(mesh, surface),
                             stabilized);
}

void ConvergenceTable::add_row(double h, double error) {
    if (!h_.empty() && !(h < h_.back()))
        throw InvalidParameter("ConvergenceTable: h must decrease down rows");
    if (!(error > 0.0)) throw NonPositiveError("ConvergenceTable: error must be positive");
    h_.push_back(h);
    errors_.push_back(error);
}

std::vector<double> ConvergenceTable::rates() const { return convergence_rates(h_, errors_); }

void ConvergenceTable::write_csv(std::ostream& out, const std::string& error_label) const {
    out << "h," << error_label << ",rate\n";
    for (size_t i = 0; i < h_.size(); ++i) {
        out << h_[i] << "," << errors_[i] << ",";
        if (i > 0)
            out << (std::log(errors_[i]) - std::log(errors_[i - 1])) /
                       (std::log(h_[i]) - std::log(h_[i - 1]));
        out << "\n";
    }
}

}  // namespace curvkit
