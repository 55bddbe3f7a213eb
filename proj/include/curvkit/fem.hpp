#pragma once

#include <span>
#include <vector>

#include "curvkit/mesh.hpp"

namespace curvkit {

// Piecewise-linear vector field given by one R^3 value per vertex.
using NodalField3 = std::vector<Vec3>;

enum class Precond {
    None,
    Jacobi,
    IncompleteCholesky,
};

struct StabilizationParams {
    double gamma_h = 0.05;  // curvature stabilization factor
    double gamma_n = 0.05;  // normal stabilization factor
    double cg_tol = 1e-10;  // relative residual
    int cg_maxit = 0;       // 0 -> solver default
    // The edge penalty makes M + gamma J badly scaled (its entries do not
    // shrink with the element areas, and thin jittered triangles spread the
    // spectrum further), so the high-level solves precondition by default.
    Precond precond = Precond::IncompleteCholesky;
};

// Symmetric sparse operator on vertex unknowns (CSR, both triangles stored).
// Element contributions are summed in fixed element order, so assembly is
// deterministic and entry(i,j) == entry(j,i) exactly.
class SparseSPD {
public:
    struct Triplet {
        int row, col;
        double value;
    };

    static SparseSPD from_triplets(int n, std::vector<Triplet> triplets);

    int dimension() const { return n_; }
    int nnz() const { return static_cast<int>(values_.size()); }

    void multiply(const std::vector<double>& x, std::vector<double>& y) const;
    double entry(int i, int j) const;
    std::vector<double> diagonal() const;

    struct RowView {
        std::span<const int> cols;  // ascending
        std::span<const double> values;
    };
    RowView row(int i) const {
        size_t begin = row_ptr_[i], end = row_ptr_[i + 1];
        return {std::span(col_).subspan(begin, end - begin),
                std::span(values_).subspan(begin, end - begin)};
    }

    // this + gamma * other (patterns merged).
    SparseSPD plus_scaled(const SparseSPD& other, double gamma) const;

    // diag(s) * A * diag(s)
    SparseSPD scaled_symmetrically(const std::vector<double>& s) const;

private:
    int n_ = 0;
    std::vector<int> row_ptr_, col_;
    std::vector<double> values_;
};

// M = integral of products of linear basis functions: A_K/12 * [[2,1,1],[1,2,1],[1,1,2]].
SparseSPD assemble_mass(const TriMesh& mesh);

// S = integral of tangential basis gradients; equals the cotangent stiffness.
// S * constant = 0, positive semi-definite.
SparseSPD assemble_stiffness(const TriMesh& mesh);

// Edge-jump stabilization assembled with unit factor (gamma applied at solve
// time): for each edge, h * |E| * j j^T where j_i is the jump of the co-normal
// tangential derivative of basis i across the edge and h is the mesh-level
// mean edge length.
SparseSPD assemble_stabilization(const TriMesh& mesh);

struct SolveOptions {
    double tol = 1e-10;  // relative residual
    int maxit = 0;       // 0 -> max(2000, 40*sqrt(n))
    Precond precond = Precond::None;
};

// Conjugate gradients, from a zero initial guess unless a warm start is given.
// Preconditioned solves run on the symmetrically diagonal-scaled system and
// test the relative residual there. Throws NoConvergence with the achieved
// residual when maxit is hit.
std::vector<double> solve_spd(const SparseSPD& A, const std::vector<double>& rhs,
                              const SolveOptions& options = {},
                              const std::vector<double>* warm_start = nullptr);

// Zero-fill incomplete Cholesky factorization on the lower-triangular pattern,
// with automatic diagonal shifting when the factorization breaks down.
class IncompleteCholesky {
public:
    explicit IncompleteCholesky(const SparseSPD& A);
    // z = (L L^T)^{-1} r
    void apply(const std::vector<double>& r, std::vector<double>& z) const;

private:
    bool factor(const SparseSPD& A, double shift);
    int n_ = 0;
    std::vector<int> lower_ptr_, lower_col_;  // L rows, columns ascending
    std::vector<double> lower_val_;
    std::vector<int> upper_ptr_, upper_col_;  // L^T rows, for the backward sweep
    std::vector<double> upper_val_;
};

// Pre-assembled operators, shared by solves that only vary gamma.
struct FemOperators {
    SparseSPD mass;
    SparseSPD stiffness;
    SparseSPD stabilization;
    std::vector<FaceFrame> frames;
};

FemOperators assemble_operators(const TriMesh& mesh);

// Stabilized discrete mean-curvature vector: solve (M + gamma_h J) H = S x per
// Cartesian component. Nodal magnitudes approximate k1 + k2.
NodalField3 curvature_vector(const TriMesh& mesh, const FemOperators& ops,
                             const StabilizationParams& params);
NodalField3 curvature_vector(const TriMesh& mesh, const StabilizationParams& params = {});

// Stabilized L2-projection of the piecewise-constant face normals:
// (M + gamma_n J) n = b with b_i = sum over incident faces of (A_K/3) n_K,
// nodal vectors normalized afterwards.
NodalField3 projected_normals(const TriMesh& mesh, const FemOperators& ops,
                              const StabilizationParams& params);
NodalField3 projected_normals(const TriMesh& mesh, const StabilizationParams& params = {});

// The unnormalized projection solve; warm_start (a previous solution for a
// nearby gamma) cuts the iteration count during parameter sweeps.
NodalField3 projected_normals_raw(const TriMesh& mesh, const FemOperators& ops,
                                  const StabilizationParams& params,
                                  const NodalField3* warm_start = nullptr);

NodalField3 curvature_vector_warm(const TriMesh& mesh, const FemOperators& ops,
                                  const StabilizationParams& params,
                                  const NodalField3* warm_start);

// Normalizes every nodal vector; throws ZeroNodalVector below 1e-14.
NodalField3 normalized_field(const NodalField3& field);

// Per-vertex scalar mean curvature (H . n)/2 from the two stabilized fields.
std::vector<double> scalar_curvature(const NodalField3& curvature, const NodalField3& normals);

// The cruder |H|/2 variant, kept for comparison.
std::vector<double> scalar_curvature_magnitude(const NodalField3& curvature);

}  // namespace curvkit
