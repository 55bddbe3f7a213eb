#include "curvkit/studies.hpp"

#include <cmath>
#include <numeric>
#include <ostream>

#include "curvkit/gamma_search.hpp"
#include "curvkit/norms.hpp"

namespace curvkit {

namespace {

void write_provenance(std::ostream& out, const char* study, double R, double r, double a,
                      double jitter, unsigned seed, const StabilizationParams& fem) {
    out << "# curvkit study=" << study << " R=" << R << " r=" << r << " a=" << a
        << " jitter=" << jitter << " seed=" << seed << " gamma_h=" << fem.gamma_h
        << " gamma_n=" << fem.gamma_n << " cg_tol=" << fem.cg_tol << "\n";
}

void write_rate_cell(std::ostream& out, const std::vector<double>& h,
                     const std::vector<double>& e, size_t i) {
    if (i > 0)
        out << (std::log(e[i]) - std::log(e[i - 1])) / (std::log(h[i]) - std::log(h[i - 1]));
}

}  // namespace

std::vector<double> NormalStudy::column_h() const {
    std::vector<double> v;
    for (const auto& r : rows) v.push_back(r.h);
    return v;
}
std::vector<double> NormalStudy::column(int scheme_index) const {
    std::vector<double> v;
    for (const auto& r : rows) v.push_back(r.eps_scheme[scheme_index]);
    return v;
}
std::vector<double> NormalStudy::column_l2() const {
    std::vector<double> v;
    for (const auto& r : rows) v.push_back(r.eps_l2);
    return v;
}
std::vector<double> NormalStudy::column_l2_stab() const {
    std::vector<double> v;
    for (const auto& r : rows) v.push_back(r.eps_l2_stab);
    return v;
}

NormalStudy run_normal_study(const StudyConfig& config) {
    SquishedTorus torus(config.R, config.r, config.a);
    NormalStudy study;
    for (auto [nu, nv] : config.ladder) {
        TriMesh mesh = generate_unstructured_torus(config.R, config.r, config.a, nu, nv,
                                                   config.seed, config.jitter, 0.0,
                                                   config.smoothing_rounds);
        auto rings = build_one_rings(mesh);
        auto frames = face_frames(mesh);
        auto exact = exact_vertex_normals(mesh, torus);

        NormalStudyRow row;
        row.n_vertices = mesh.n_vertices();
        row.h = 1.0 / std::sqrt(static_cast<double>(row.n_vertices));

        for (size_t s = 0; s < kAllSchemes.size(); ++s) {
            NodalField3 n = weighted_vertex_normals(mesh, rings, kAllSchemes[s]);
            row.eps_scheme[s] = normal_error(mesh, frames, n, exact);
        }

        NormalErrorOfGamma error_of_gamma(mesh, torus, config.fem);
        row.eps_l2 = error_of_gamma(0.0);
        SearchResult search = golden_section(error_of_gamma, 0.0, 1.0, config.search_tol);
        row.gamma_star = search.x_min;
        row.eps_l2_stab = std::min(search.f_min, row.eps_l2);
        study.rows.push_back(row);
    }
    return study;
}

void write_normal_study_csv(std::ostream& out, const NormalStudy& study,
                            const StudyConfig& config) {
    write_provenance(out, "normals", config.R, config.r, config.a, config.jitter, config.seed,
                     config.fem);
    out << "h,N_v,L2,L2_rate,L2stab,L2stab_rate,gamma_star";
    for (auto scheme : kAllSchemes)
        out << "," << scheme_name(scheme) << "," << scheme_name(scheme) << "_rate";
    out << "\n";
    auto h = study.column_h();
    auto l2 = study.column_l2();
    auto stab = study.column_l2_stab();
    for (size_t i = 0; i < study.rows.size(); ++i) {
        const auto& row = study.rows[i];
        out << row.h << "," << row.n_vertices << "," << row.eps_l2 << ",";
        write_rate_cell(out, h, l2, i);
        out << "," << row.eps_l2_stab << ",";
        write_rate_cell(out, h, stab, i);
        out << "," << row.gamma_star;
        for (size_t s = 0; s < kAllSchemes.size(); ++s) {
            out << "," << row.eps_scheme[s] << ",";
            write_rate_cell(out, h, study.column(static_cast<int>(s)), i);
        }
        out << "\n";
    }
}

namespace {

GammaStudy run_gamma_study(const StudyConfig& config, bool curvature) {
    SquishedTorus torus(config.R, config.r, config.a);
    GammaStudy study;
    for (auto [nu, nv] : curvature ? config.curvature_ladder : config.ladder) {
        TriMesh mesh =
            curvature ? generate_patterned_torus(config.R, config.r, config.a, nu, nv,
                                                 config.seed, config.row_shift,
                                                 config.pattern_jitter)
                      : generate_unstructured_torus(config.R, config.r, config.a, nu, nv,
                                                    config.seed, config.jitter, 0.0,
                                                    config.smoothing_rounds);
        GammaStudyRow row;
        row.n_vertices = mesh.n_vertices();
        row.h = 1.0 / std::sqrt(static_cast<double>(row.n_vertices));
        if (curvature) {
            CurvatureErrorOfGamma f(mesh, torus, config.fem);
            row.eps_unstabilized = f(0.0);
            row.search = golden_section(f, 0.0, 0.15, config.search_tol);
        } else {
            NormalErrorOfGamma f(mesh, torus, config.fem);
            row.eps_unstabilized = f(0.0);
            row.search = golden_section(f, 0.0, 1.0, config.search_tol);
        }
        row.gamma_star = row.search.x_min;
        row.eps_star = std::min(row.search.f_min, row.eps_unstabilized);
        row.relative_change = (row.eps_unstabilized - row.eps_star) / row.eps_unstabilized;
        study.rows.push_back(row);
    }
    return study;
}

}  // namespace

GammaStudy run_gamma_normal_study(const StudyConfig& config) {
    return run_gamma_study(config, false);
}

GammaStudy run_gamma_curvature_study(const StudyConfig& config) {
    return run_gamma_study(config, true);
}

void write_gamma_study_csv(std::ostream& out, const GammaStudy& study,
                           const StudyConfig& config) {
    write_provenance(out, "gamma", config.R, config.r, config.a, config.jitter, config.seed,
                     config.fem);
    out << "h,N_v,gamma_star,eps_unstabilized,eps_star,delta,relative_change,evaluations\n";
    for (const auto& row : study.rows) {
        out << row.h << "," << row.n_vertices << "," << row.gamma_star << ","
            << row.eps_unstabilized << "," << row.eps_star << ","
            << row.eps_unstabilized - row.eps_star << "," << row.relative_change << ","
            << row.search.evaluations << "\n";
    }
}

void write_gamma_trace_csv(std::ostream& out, const GammaStudy& study,
                           const StudyConfig& config) {
    write_provenance(out, "gamma-trace", config.R, config.r, config.a, config.jitter, config.seed,
                     config.fem);
    out << "h,gamma,eps\n";
    for (const auto& row : study.rows)
        for (const auto& [gamma, eps] : row.search.probes)
            out << row.h << "," << gamma << "," << eps << "\n";
}

std::vector<double> CurvatureStudy::column_h() const {
    std::vector<double> v;
    for (const auto& r : rows) v.push_back(r.h);
    return v;
}
std::vector<double> CurvatureStudy::column_fem() const {
    std::vector<double> v;
    for (const auto& r : rows) v.push_back(r.eps_fem);
    return v;
}
std::vector<double> CurvatureStudy::column_ssf() const {
    std::vector<double> v;
    for (const auto& r : rows) v.push_back(r.eps_ssf);
    return v;
}
std::vector<double> CurvatureStudy::column_dllb() const {
    std::vector<double> v;
    for (const auto& r : rows) v.push_back(r.eps_dllb);
    return v;
}

CurvatureStudy run_curvature_study(const StudyConfig& config) {
    SquishedTorus torus(config.R, config.r, config.a);
    CurvatureStudy study;
    for (auto [nu, nv] : config.curvature_ladder) {
        TriMesh mesh = generate_patterned_torus(config.R, config.r, config.a, nu, nv,
                                                config.seed, config.row_shift,
                                                config.pattern_jitter);
        auto rings = build_one_rings(mesh);
        FemOperators ops = assemble_operators(mesh);

        CurvatureStudyRow row;
        row.n_vertices = mesh.n_vertices();
        row.h = 1.0 / std::sqrt(static_cast<double>(row.n_vertices));

        NodalField3 H = curvature_vector(mesh, ops, config.fem);
        NodalField3 n_h = projected_normals(mesh, ops, config.fem);
        row.eps_fem = curvature_error(mesh, scalar_curvature(H, n_h), torus);

        NodalField3 mwa = weighted_vertex_normals(mesh, rings, NormalScheme::MWA);
        SsfResult ssf = ssf_curvature(mesh, rings, mwa);
        row.eps_ssf = curvature_error(mesh, ssf.mean_curvature, torus, &ssf.valid);
        row.ssf_invalid = ssf.invalid_count;

        DllbResult d = dllb(mesh, rings, VertexAreaMode::Barycentric);
        row.eps_dllb = curvature_error(mesh, d.mean_curvature, torus);

        study.rows.push_back(row);
    }
    return study;
}

void write_curvature_study_csv(std::ostream& out, const CurvatureStudy& study,
                               const StudyConfig& config) {
    write_provenance(out, "curvature", config.R, config.r, config.a, config.jitter, config.seed,
                     config.fem);
    out << "h,N_v,gamma_H,Hh,Hh_rate,SSF,SSF_rate,SSF_invalid,DLLB,DLLB_rate\n";
    auto h = study.column_h();
    auto fem = study.column_fem();
    auto ssf = study.column_ssf();
    auto dllb = study.column_dllb();
    for (size_t i = 0; i < study.rows.size(); ++i) {
        const auto& row = study.rows[i];
        out << row.h << "," << row.n_vertices << "," << config.fem.gamma_h << "," << row.eps_fem
            << ",";
        write_rate_cell(out, h, fem, i);
        out << "," << row.eps_ssf << ",";
        write_rate_cell(out, h, ssf, i);
        out << "," << row.ssf_invalid << "," << row.eps_dllb << ",";
        write_rate_cell(out, h, dllb, i);
        out << "\n";
    }
}

TriMesh initial_study_mesh(const SquishedTorus& torus, int n_u, int n_v, double jitter,
                           unsigned seed) {
    TriMesh coarse = generate_torus(torus.R(), torus.r(), torus.a(), n_u, n_v, jitter, seed);
    RefineState state = make_refine_state(std::move(coarse));
    std::vector<int> all(state.mesh.n_faces());
    std::iota(all.begin(), all.end(), 0);
    return red_green_refine(state, all, Placer{}).mesh;
}

AdaptiveResult run_refinement_study(const RefinementStudyConfig& config) {
    SquishedTorus torus(config.R, config.r, config.a);
    TriMesh initial =
        initial_study_mesh(torus, config.coarse_nu, config.coarse_nv, config.jitter, config.seed);

    AdaptiveOptions options;
    options.fem = config.fem;
    options.max_rounds = config.rounds;
    options.theta = config.theta;
    options.mark_all = !config.adaptive;
    options.surface = &torus;
    options.projection_tol = config.projection_tol;
    options.placer.kind = config.placement;
    options.placer.surface = &torus;
    options.placer.fem = config.fem;

    // adaptive_loop recomputes the stabilized normals of the whole mesh each
    // round and shares them between the indicator and the PN placement.
    return adaptive_loop(std::move(initial), options);
}

void write_refinement_csv(std::ostream& out, const AdaptiveResult& result,
                          const RefinementStudyConfig& config) {
    StabilizationParams fem = config.fem;
    write_provenance(out, config.adaptive ? "pn-adaptive" : "pn-uniform", config.R, config.r,
                     config.a, config.jitter, config.seed, fem);
    out << "# placement="
        << (config.placement == Placer::Kind::PNSurface
                ? "pn"
                : (config.placement == Placer::Kind::ExactProjection ? "exact" : "midpoint"))
        << " theta=" << config.theta << " rounds=" << config.rounds << "\n";
    out << "round,N_e,h,indicator,eps_geom,eps_geom_rate,effectivity\n";
    for (size_t i = 0; i < result.rounds.size(); ++i) {
        const auto& row = result.rounds[i];
        out << row.round << "," << row.n_elements << "," << row.h << "," << row.indicator << ","
            << row.eps_geom << ",";
        if (i > 0 && row.eps_geom > 0.0 && result.rounds[i - 1].eps_geom > 0.0)
            out << (std::log(row.eps_geom) - std::log(result.rounds[i - 1].eps_geom)) /
                       (std::log(row.h) - std::log(result.rounds[i - 1].h));
        out << "," << row.effectivity << "\n";
    }
}

}  // namespace curvkit
