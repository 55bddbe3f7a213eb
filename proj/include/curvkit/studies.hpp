#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "curvkit/estimators.hpp"
#include "curvkit/golden_section.hpp"
#include "curvkit/implicit.hpp"
#include "curvkit/refine.hpp"

namespace curvkit {

// Shared configuration for the torus convergence studies. The normal studies
// run on the smoothed unstructured family; the curvature studies run on the
// patterned family, whose self-similar irregularity the smoothing would
// average away (see generate_unstructured_torus / generate_patterned_torus).
struct StudyConfig {
    double R = 1.0;
    double r = 0.5;
    double a = 1.0;
    // roughly 1k, 4k, 16k, 66k vertices; even dimensions keep the alternating
    // diagonals periodic across the seam
    std::vector<std::pair<int, int>> ladder = {{44, 22}, {90, 44}, {180, 90}, {362, 182}};
    // the curvature comparisons span ~500 to ~31k vertices
    std::vector<std::pair<int, int>> curvature_ladder = {{30, 16}, {62, 30}, {124, 62}, {250, 124}};
    unsigned seed = 7;
    double jitter = 0.3;        // pre-smoothing jitter of the normal-study family
    int smoothing_rounds = 3;
    double row_shift = 0.3;     // brick shift of the curvature-study family
    double pattern_jitter = 0.15;
    StabilizationParams fem;
    double search_tol = 1e-4;
};

constexpr std::array<NormalScheme, 7> kAllSchemes = {
    NormalScheme::MWE,   NormalScheme::MWA,   NormalScheme::MWSELR, NormalScheme::MWAAT,
    NormalScheme::MWELR, NormalScheme::MWRELR, NormalScheme::DLLB};

// --- vertex-normal comparison (one row per ladder rung) ---

struct NormalStudyRow {
    double h;  // 1/sqrt(N_v)
    int n_vertices;
    double eps_l2;       // unstabilized projection
    double eps_l2_stab;  // at the searched optimum
    double gamma_star;
    std::array<double, 7> eps_scheme;  // kAllSchemes order
};

struct NormalStudy {
    std::vector<NormalStudyRow> rows;
    std::vector<double> column_h() const;
    std::vector<double> column(int scheme_index) const;
    std::vector<double> column_l2() const;
    std::vector<double> column_l2_stab() const;
};

NormalStudy run_normal_study(const StudyConfig& config);
void write_normal_study_csv(std::ostream& out, const NormalStudy& study,
                            const StudyConfig& config);

// --- stabilization-factor search (gamma* per rung + probe traces) ---

struct GammaStudyRow {
    double h;
    int n_vertices;
    double gamma_star;
    double eps_unstabilized;
    double eps_star;
    double relative_change;  // (eps0 - eps*)/eps0
    SearchResult search;
};

struct GammaStudy {
    std::vector<GammaStudyRow> rows;
};

// Normal error over gamma_n in [0, 1].
GammaStudy run_gamma_normal_study(const StudyConfig& config);
// Curvature error over gamma_H in [0, 0.15].
GammaStudy run_gamma_curvature_study(const StudyConfig& config);
void write_gamma_study_csv(std::ostream& out, const GammaStudy& study,
                           const StudyConfig& config);
void write_gamma_trace_csv(std::ostream& out, const GammaStudy& study,
                           const StudyConfig& config);

// --- mean-curvature comparison: stabilized FEM vs SSF vs DLLB ---

struct CurvatureStudyRow {
    double h;
    int n_vertices;
    double eps_fem;   // (H . n)/2 at fixed gamma_h
    double eps_ssf;   // quadratic fit with MWA frame normals
    double eps_dllb;  // cotangent operator, barycentric areas
    int ssf_invalid;
};

struct CurvatureStudy {
    std::vector<CurvatureStudyRow> rows;
    std::vector<double> column_h() const;
    std::vector<double> column_fem() const;
    std::vector<double> column_ssf() const;
    std::vector<double> column_dllb() const;
};

CurvatureStudy run_curvature_study(const StudyConfig& config);
void write_curvature_study_csv(std::ostream& out, const CurvatureStudy& study,
                               const StudyConfig& config);

// --- PN / projection refinement studies ---

struct RefinementStudyConfig {
    double R = 1.0;
    double r = 0.5;
    double a = 4.0;
    int coarse_nu = 16;
    int coarse_nv = 10;
    double jitter = 0.3;
    unsigned seed = 7;
    StabilizationParams fem;
    int rounds = 4;
    double theta = 0.5;
    bool adaptive = true;  // uniform (mark-all) otherwise
    Placer::Kind placement = Placer::Kind::PNSurface;
    double projection_tol = 1e-10;
};

// The initial configuration for the geometry studies: a coarse parametric mesh
// refined once with plain midpoints, which puts half the vertices off the exact
// surface and gives the starting geometric error the refinements work down.
TriMesh initial_study_mesh(const SquishedTorus& torus, int n_u, int n_v, double jitter,
                           unsigned seed);

AdaptiveResult run_refinement_study(const RefinementStudyConfig& config);
void write_refinement_csv(std::ostream& out, const AdaptiveResult& result,
                          const RefinementStudyConfig& config);

}  // namespace curvkit
