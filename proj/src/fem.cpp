#include "curvkit/fem.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

#include "curvkit/parallel.hpp"

namespace curvkit {

SparseSPD SparseSPD::from_triplets(int n, std::vector<Triplet> triplets) {
    SparseSPD A;
    A.n_ = n;
    std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    A.row_ptr_.assign(n + 1, 0);
    size_t i = 0;
    while (i < triplets.size()) {
        size_t j = i;
        double sum = 0.0;
        while (j < triplets.size() && triplets[j].row == triplets[i].row &&
               triplets[j].col == triplets[i].col) {
            sum += triplets[j].value;
            ++j;
        }
        A.col_.push_back(triplets[i].col);
        A.values_.push_back(sum);
        A.row_ptr_[triplets[i].row + 1]++;
        i = j;
    }
    for (int r = 0; r < n; ++r) A.row_ptr_[r + 1] += A.row_ptr_[r];
    return A;
}

void SparseSPD::multiply(const std::vector<double>& x, std::vector<double>& y) const {
    y.assign(n_, 0.0);
    for (int r = 0; r < n_; ++r) {
        double acc = 0.0;
        for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) acc += values_[k] * x[col_[k]];
        y[r] = acc;
    }
}

double SparseSPD::entry(int i, int j) const {
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
        if (col_[k] == j) return values_[k];
    return 0.0;
}

std::vector<double> SparseSPD::diagonal() const {
    std::vector<double> d(n_, 0.0);
    for (int r = 0; r < n_; ++r) d[r] = entry(r, r);
    return d;
}

SparseSPD SparseSPD::plus_scaled(const SparseSPD& other, double gamma) const {
    SparseSPD out;
    out.n_ = n_;
    out.row_ptr_.assign(n_ + 1, 0);
    out.col_.reserve(col_.size() + other.col_.size());
    out.values_.reserve(col_.size() + other.col_.size());
    for (int r = 0; r < n_; ++r) {
        int ka = row_ptr_[r], ea = row_ptr_[r + 1];
        int kb = other.row_ptr_[r], eb = other.row_ptr_[r + 1];
        while (ka < ea || kb < eb) {
            int ca = ka < ea ? col_[ka] : n_;
            int cb = kb < eb ? other.col_[kb] : n_;
            if (ca < cb) {
                out.col_.push_back(ca);
                out.values_.push_back(values_[ka++]);
            } else if (cb < ca) {
                out.col_.push_back(cb);
                out.values_.push_back(gamma * other.values_[kb++]);
            } else {
                out.col_.push_back(ca);
                out.values_.push_back(values_[ka++] + gamma * other.values_[kb++]);
            }
        }
        out.row_ptr_[r + 1] = static_cast<int>(out.col_.size());
    }
    return out;
}

SparseSPD SparseSPD::scaled_symmetrically(const std::vector<double>& s) const {
    SparseSPD out = *this;
    for (int r = 0; r < n_; ++r)
        for (int k = out.row_ptr_[r]; k < out.row_ptr_[r + 1]; ++k)
            out.values_[k] = s[r] * values_[k] * s[out.col_[k]];
    return out;
}

namespace {

// In-plane gradients of the three linear basis functions on face f.
std::array<Vec3, 3> basis_gradients(const TriMesh& mesh, int f, const Vec3& unit_normal,
                                    double area) {
    const auto& fc = mesh.faces[f];
    std::array<Vec3, 3> g;
    for (int c = 0; c < 3; ++c) {
        Vec3 opposite_edge = mesh.vertices[fc[(c + 2) % 3]] - mesh.vertices[fc[(c + 1) % 3]];
        g[c] = cross(unit_normal, opposite_edge) / (2.0 * area);
    }
    return g;
}

}  // namespace

SparseSPD assemble_mass(const TriMesh& mesh) {
    const int nf = mesh.n_faces();
    std::vector<SparseSPD::Triplet> trip(static_cast<size_t>(nf) * 9);
    const auto frames = face_frames(mesh);
    parallel_for(nf, [&](int begin, int end) {
        for (int f = begin; f < end; ++f) {
            const auto& fc = mesh.faces[f];
            double w = frames[f].area / 12.0;
            size_t base = static_cast<size_t>(f) * 9;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    trip[base + 3 * i + j] = {fc[i], fc[j], (i == j ? 2.0 : 1.0) * w};
        }
    });
    return SparseSPD::from_triplets(mesh.n_vertices(), std::move(trip));
}

SparseSPD assemble_stiffness(const TriMesh& mesh) {
    const int nf = mesh.n_faces();
    std::vector<SparseSPD::Triplet> trip(static_cast<size_t>(nf) * 9);
    const auto frames = face_frames(mesh);
    parallel_for(nf, [&](int begin, int end) {
        for (int f = begin; f < end; ++f) {
            const auto& fc = mesh.faces[f];
            auto g = basis_gradients(mesh, f, frames[f].normal, frames[f].area);
            size_t base = static_cast<size_t>(f) * 9;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    trip[base + 3 * i + j] = {fc[i], fc[j], frames[f].area * dot(g[i], g[j])};
        }
    });
    return SparseSPD::from_triplets(mesh.n_vertices(), std::move(trip));
}

SparseSPD assemble_stabilization(const TriMesh& mesh) {
    const auto frames = face_frames(mesh);
    const auto adjacency = edge_adjacency(mesh);
    const int ne = static_cast<int>(adjacency.size());

    // The penalty weight h is the mesh-level mean edge length, so a given
    // gamma means the same stabilization strength across resolutions.
    double h_mean = 0.0;
    for (const EdgeAdjacency& a : adjacency) h_mean += a.length;
    h_mean /= std::max(1, ne);

    std::vector<SparseSPD::Triplet> trip(static_cast<size_t>(ne) * 16);
    parallel_for(ne, [&](int begin, int end) {
        for (int e = begin; e < end; ++e) {
            const EdgeAdjacency& a = adjacency[e];
            // Patch = the up-to-4 vertices of the two faces sharing the edge.
            int patch[4];
            double jump[4] = {0, 0, 0, 0};
            int np = 0;
            auto patch_slot = [&](int v) {
                for (int k = 0; k < np; ++k)
                    if (patch[k] == v) return k;
                patch[np] = v;
                return np++;
            };
            for (int s = 0; s < 2; ++s) {
                int f = a.face[s];
                const auto& fc = mesh.faces[f];
                auto g = basis_gradients(mesh, f, frames[f].normal, frames[f].area);
                for (int c = 0; c < 3; ++c)
                    jump[patch_slot(fc[c])] += dot(a.conormal[s], g[c]);
            }
            // h (j_i, j_j)_E with constant jumps along E, so the edge integral
            // contributes h |E| j_i j_j. The product j_i * j_j is formed first
            // to keep the assembled matrix bitwise symmetric.
            double w = h_mean * a.length;
            size_t base = static_cast<size_t>(e) * 16;
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) {
                    if (i < np && j < np)
                        trip[base + 4 * i + j] = {patch[i], patch[j], w * (jump[i] * jump[j])};
                    else
                        trip[base + 4 * i + j] = {patch[0], patch[0], 0.0};
                }
        }
    });
    return SparseSPD::from_triplets(mesh.n_vertices(), std::move(trip));
}

IncompleteCholesky::IncompleteCholesky(const SparseSPD& A) : n_(A.dimension()) {
    double mean_diag = 0.0;
    for (double d : A.diagonal()) mean_diag += d;
    mean_diag /= std::max(1, n_);
    double shift = 0.0;
    while (!factor(A, shift)) {
        shift = shift == 0.0 ? 1e-3 * mean_diag : 10.0 * shift;
        if (shift > 1e6 * mean_diag)
            throw Error("incomplete Cholesky kept breaking down despite shifting");
    }
}

bool IncompleteCholesky::factor(const SparseSPD& A, double shift) {
    lower_ptr_.assign(1, 0);
    lower_col_.clear();
    lower_val_.clear();

    // Up-looking IC(0) on the lower-triangular pattern of A. Each stored row
    // holds its sub-diagonal entries (columns ascending) followed by the
    // diagonal. Row patterns are sorted, so the dot products over shared
    // columns are two-pointer merges.
    for (int i = 0; i < n_; ++i) {
        int row_begin = static_cast<int>(lower_col_.size());
        double diag_accum = shift;
        bool have_diag = false;
        auto row = A.row(i);
        for (size_t k = 0; k < row.cols.size(); ++k) {
            int j = row.cols[k];
            if (j > i) break;
            if (j == i) {
                diag_accum += row.values[k];
                have_diag = true;
                break;
            }
            // L_ij = (A_ij - sum_{t<j} L_it L_jt) / L_jj
            double s = row.values[k];
            int pi = row_begin, pi_end = static_cast<int>(lower_col_.size());
            int pj = lower_ptr_[j], pj_end = lower_ptr_[j + 1] - 1;  // skip row j's diagonal
            while (pi < pi_end && pj < pj_end) {
                if (lower_col_[pi] < lower_col_[pj]) {
                    ++pi;
                } else if (lower_col_[pj] < lower_col_[pi]) {
                    ++pj;
                } else {
                    s -= lower_val_[pi++] * lower_val_[pj++];
                }
            }
            double l_jj = lower_val_[lower_ptr_[j + 1] - 1];
            lower_col_.push_back(j);
            lower_val_.push_back(s / l_jj);
        }
        if (!have_diag) return false;
        for (int k = row_begin; k < static_cast<int>(lower_col_.size()); ++k)
            diag_accum -= lower_val_[k] * lower_val_[k];
        if (!(diag_accum > 0.0)) return false;
        lower_col_.push_back(i);
        lower_val_.push_back(std::sqrt(diag_accum));
        lower_ptr_.push_back(static_cast<int>(lower_col_.size()));
    }

    // Transpose for the backward sweep: row i of L^T = (diagonal, then the
    // entries L_ji with j > i).
    upper_ptr_.assign(n_ + 1, 0);
    for (int i = 0; i < n_; ++i)
        for (int k = lower_ptr_[i]; k < lower_ptr_[i + 1]; ++k) upper_ptr_[lower_col_[k] + 1]++;
    for (int i = 0; i < n_; ++i) upper_ptr_[i + 1] += upper_ptr_[i];
    upper_col_.assign(lower_col_.size(), 0);
    upper_val_.assign(lower_val_.size(), 0.0);
    std::vector<int> cursor(upper_ptr_.begin(), upper_ptr_.end() - 1);
    for (int i = 0; i < n_; ++i) {
        for (int k = lower_ptr_[i]; k < lower_ptr_[i + 1]; ++k) {
            int slot = cursor[lower_col_[k]]++;
            upper_col_[slot] = i;
            upper_val_[slot] = lower_val_[k];
        }
    }
    return true;
}

void IncompleteCholesky::apply(const std::vector<double>& r, std::vector<double>& z) const {
    // forward: L y = r (diagonal is each row's last entry)
    std::vector<double> y(n_);
    for (int i = 0; i < n_; ++i) {
        double s = r[i];
        int end = lower_ptr_[i + 1] - 1;
        for (int k = lower_ptr_[i]; k < end; ++k) s -= lower_val_[k] * y[lower_col_[k]];
        y[i] = s / lower_val_[end];
    }
    // backward: L^T z = y (diagonal is each upper row's first entry)
    z.assign(n_, 0.0);
    for (int i = n_ - 1; i >= 0; --i) {
        double s = y[i];
        for (int k = upper_ptr_[i] + 1; k < upper_ptr_[i + 1]; ++k)
            s -= upper_val_[k] * z[upper_col_[k]];
        z[i] = s / upper_val_[upper_ptr_[i]];
    }
}

namespace {

// Plain CG with an optional preconditioner callback; stops on the relative
// residual of the system it is handed.
template <class P>
std::vector<double> run_cg(const SparseSPD& A, const std::vector<double>& rhs, double tol,
                           int maxit, P&& precondition,
                           const std::vector<double>* warm_start = nullptr) {
    const int n = A.dimension();
    std::vector<double> x(n, 0.0);
    double bnorm = std::sqrt(std::inner_product(rhs.begin(), rhs.end(), rhs.begin(), 0.0));
    if (bnorm == 0.0) return x;

    std::vector<double> r = rhs, z(n), p(n), Ap(n);
    if (warm_start && static_cast<int>(warm_start->size()) == n) {
        x = *warm_start;
        A.multiply(x, Ap);
        for (int i = 0; i < n; ++i) r[i] = rhs[i] - Ap[i];
    }
    precondition(r, z);
    p = z;
    double rz = std::inner_product(r.begin(), r.end(), z.begin(), 0.0);
    double rnorm = bnorm;
    for (int it = 0; it < maxit; ++it) {
        A.multiply(p, Ap);
        double pAp = std::inner_product(p.begin(), p.end(), Ap.begin(), 0.0);
        double alpha = rz / pAp;
        for (int i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * Ap[i];
        }
        rnorm = std::sqrt(std::inner_product(r.begin(), r.end(), r.begin(), 0.0));
        if (rnorm / bnorm <= tol) return x;
        precondition(r, z);
        double rz_next = std::inner_product(r.begin(), r.end(), z.begin(), 0.0);
        double beta = rz_next / rz;
        rz = rz_next;
        for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    throw NoConvergence("conjugate gradients stalled", rnorm / bnorm, maxit);
}

}  // namespace

std::vector<double> solve_spd(const SparseSPD& A, const std::vector<double>& rhs,
                              const SolveOptions& options,
                              const std::vector<double>* warm_start) {
    const int n = A.dimension();
    int maxit = options.maxit > 0
                    ? options.maxit
                    : std::max(2000, static_cast<int>(40.0 * std::sqrt(static_cast<double>(n))));

    if (options.precond == Precond::None)
        return run_cg(
            A, rhs, options.tol, maxit,
            [](const std::vector<double>& in, std::vector<double>& out) { out = in; },
            warm_start);

    // Preconditioned paths solve the symmetrically scaled system
    // (D^-1/2 A D^-1/2) y = D^-1/2 b with x = D^-1/2 y. The mass scales with
    // the element areas while the edge penalty does not, so without this the
    // attainable residual of fine stabilized systems is above any usable
    // tolerance in double precision. The convergence test applies to the
    // scaled system (equivalently, the residual in the diagonal norm).
    std::vector<double> scale = A.diagonal();
    for (double& d : scale) d = d > 0.0 ? 1.0 / std::sqrt(d) : 1.0;
    SparseSPD scaled = A.scaled_symmetrically(scale);
    std::vector<double> scaled_rhs(n);
    for (int i = 0; i < n; ++i) scaled_rhs[i] = scale[i] * rhs[i];
    std::vector<double> scaled_start;
    if (warm_start && static_cast<int>(warm_start->size()) == n) {
        scaled_start.resize(n);
        for (int i = 0; i < n; ++i) scaled_start[i] = (*warm_start)[i] / scale[i];
    }
    const std::vector<double>* start = scaled_start.empty() ? nullptr : &scaled_start;

    std::vector<double> y;
    if (options.precond == Precond::IncompleteCholesky) {
        IncompleteCholesky ic(scaled);
        y = run_cg(
            scaled, scaled_rhs, options.tol, maxit,
            [&](const std::vector<double>& in, std::vector<double>& out) { ic.apply(in, out); },
            start);
    } else {
        // Jacobi: the scaled system already has a unit diagonal.
        y = run_cg(
            scaled, scaled_rhs, options.tol, maxit,
            [](const std::vector<double>& in, std::vector<double>& out) { out = in; }, start);
    }
    for (int i = 0; i < n; ++i) y[i] *= scale[i];
    return y;
}

FemOperators assemble_operators(const TriMesh& mesh) {
    return {assemble_mass(mesh), assemble_stiffness(mesh), assemble_stabilization(mesh),
            face_frames(mesh)};
}

namespace {

SolveOptions solver_options(const StabilizationParams& params) {
    return {params.cg_tol, params.cg_maxit, params.precond};
}

// Solve (M + gamma J) u = rhs componentwise; the vector system is block-diagonal
// across Cartesian components.
NodalField3 solve_vector_system(const FemOperators& ops, double gamma,
                                const std::array<std::vector<double>, 3>& rhs,
                                const StabilizationParams& params,
                                const NodalField3* warm_start = nullptr) {
    SparseSPD A = gamma != 0.0 ? ops.mass.plus_scaled(ops.stabilization, gamma) : ops.mass;
    const size_t n = rhs[0].size();
    NodalField3 out(n);
    std::vector<double> start;
    for (int c = 0; c < 3; ++c) {
        const std::vector<double>* x0 = nullptr;
        if (warm_start && warm_start->size() == n) {
            start.resize(n);
            for (size_t i = 0; i < n; ++i) start[i] = (*warm_start)[i][c];
            x0 = &start;
        }
        auto u = solve_spd(A, rhs[c], solver_options(params), x0);
        for (size_t i = 0; i < n; ++i) out[i][c] = u[i];
    }
    return out;
}

}  // namespace

NodalField3 curvature_vector_warm(const TriMesh& mesh, const FemOperators& ops,
                                  const StabilizationParams& params,
                                  const NodalField3* warm_start) {
    const int nv = mesh.n_vertices();
    std::array<std::vector<double>, 3> rhs;
    std::vector<double> coords(nv);
    for (int c = 0; c < 3; ++c) {
        for (int i = 0; i < nv; ++i) coords[i] = mesh.vertices[i][c];
        rhs[c].resize(nv);
        ops.stiffness.multiply(coords, rhs[c]);
    }
    return solve_vector_system(ops, params.gamma_h, rhs, params, warm_start);
}

NodalField3 curvature_vector(const TriMesh& mesh, const FemOperators& ops,
                             const StabilizationParams& params) {
    return curvature_vector_warm(mesh, ops, params, nullptr);
}

NodalField3 curvature_vector(const TriMesh& mesh, const StabilizationParams& params) {
    return curvature_vector(mesh, assemble_operators(mesh), params);
}

NodalField3 normalized_field(const NodalField3& field) {
    NodalField3 out(field.size());
    for (size_t i = 0; i < field.size(); ++i) {
        double len = norm(field[i]);
        if (len < 1e-14)
            throw ZeroNodalVector("nodal vector vanished at vertex " + std::to_string(i));
        out[i] = field[i] / len;
    }
    return out;
}

NodalField3 projected_normals_raw(const TriMesh& mesh, const FemOperators& ops,
                                  const StabilizationParams& params,
                                  const NodalField3* warm_start) {
    const int nv = mesh.n_vertices();
    std::array<std::vector<double>, 3> rhs;
    for (int c = 0; c < 3; ++c) rhs[c].assign(nv, 0.0);
    for (int f = 0; f < mesh.n_faces(); ++f) {
        const auto& fc = mesh.faces[f];
        Vec3 contrib = ops.frames[f].normal * (ops.frames[f].area / 3.0);
        for (int c = 0; c < 3; ++c) {
            rhs[0][fc[c]] += contrib.x;
            rhs[1][fc[c]] += contrib.y;
            rhs[2][fc[c]] += contrib.z;
        }
    }
    return solve_vector_system(ops, params.gamma_n, rhs, params, warm_start);
}

NodalField3 projected_normals(const TriMesh& mesh, const FemOperators& ops,
                              const StabilizationParams& params) {
    return normalized_field(projected_normals_raw(mesh, ops, params));
}

NodalField3 projected_normals(const TriMesh& mesh, const StabilizationParams& params) {
    return projected_normals(mesh, assemble_operators(mesh), params);
}

std::vector<double> scalar_curvature(const NodalField3& curvature, const NodalField3& normals) {
    std::vector<double> H(curvature.size());
    for (size_t i = 0; i < curvature.size(); ++i) H[i] = 0.5 * dot(curvature[i], normals[i]);
    return H;
}

std::vector<double> scalar_curvature_magnitude(const NodalField3& curvature) {
    std::vector<double> H(curvature.size());
    for (size_t i = 0; i < curvature.size(); ++i) H[i] = 0.5 * norm(curvature[i]);
    return H;
}

}  // namespace curvkit
