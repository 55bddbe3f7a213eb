#include "curvkit/refine.hpp"

#include <algorithm>
#include <deque>

#include "curvkit/norms.hpp"
#include "curvkit/pn_triangle.hpp"

namespace curvkit {

RefineState make_refine_state(TriMesh mesh) {
    RefineState state;
    state.green_id.assign(mesh.n_faces(), -1);
    state.mesh = std::move(mesh);
    return state;
}

std::vector<double> error_indicators(const TriMesh& mesh, const std::vector<FaceFrame>& frames,
                                     const NodalField3& n_h) {
    std::vector<double> eta(mesh.n_faces());
    for (int f = 0; f < mesh.n_faces(); ++f) {
        double s = 0.0;
        for (int c = 0; c < 3; ++c) s += norm2(n_h[mesh.faces[f][c]] - frames[f].normal);
        eta[f] = std::sqrt(frames[f].area / 3.0 * s);
    }
    return eta;
}

namespace {

// Rotate a face's vertex triple so the given undirected edge is (v0, v1).
std::array<int, 3> rotate_to_edge(const std::array<int, 3>& face, int a, int b) {
    for (int c = 0; c < 3; ++c) {
        int i = face[c], j = face[(c + 1) % 3];
        if ((i == a && j == b) || (i == b && j == a))
            return {face[c], face[(c + 1) % 3], face[(c + 2) % 3]};
    }
    throw MeshError(MeshError::Code::Invalid, "edge not on face");
}

struct Splitter {
    const RefineState& state;
    const TriMesh& mesh;
    std::vector<char> edge_split;
    std::vector<char> face_red;       // non-green faces red-split in place
    std::vector<char> pair_promoted;  // green pairs recombined and red-split
    std::deque<int> worklist;

    explicit Splitter(const RefineState& s)
        : state(s),
          mesh(s.mesh),
          edge_split(s.mesh.n_edges(), 0),
          face_red(s.mesh.n_faces(), 0),
          pair_promoted(s.greens.size(), 0) {}

    void split_edge(int e) {
        if (e < 0 || edge_split[e]) return;
        edge_split[e] = 1;
        worklist.push_back(mesh.edges()[e].face[0]);
        worklist.push_back(mesh.edges()[e].face[1]);
    }

    void make_red(int f) {
        if (face_red[f]) return;
        face_red[f] = 1;
        for (int e : mesh.face_edges(f)) split_edge(e);
    }

    void promote(int g) {
        if (pair_promoted[g]) return;
        pair_promoted[g] = 1;
        const auto& p = state.greens[g].parent;
        // Parent edges (b,c) and (c,a) are live mesh edges; (a,b) already has
        // its midpoint from the earlier bisection.
        split_edge(mesh.find_edge(p[1], p[2]));
        split_edge(mesh.find_edge(p[2], p[0]));
    }

    void mark(int f) {
        int g = state.green_id[f];
        if (g >= 0)
            promote(g);
        else
            make_red(f);
    }

    void run(const std::vector<int>& marked) {
        for (int f : marked) mark(f);
        while (!worklist.empty()) {
            int f = worklist.front();
            worklist.pop_front();
            if (face_red[f]) continue;
            int g = state.green_id[f];
            if (g >= 0) {
                promote(g);
                continue;
            }
            int count = 0;
            for (int e : mesh.face_edges(f)) count += edge_split[e];
            if (count >= 2) make_red(f);
        }
    }
};

class MeshBuilder {
public:
    explicit MeshBuilder(const TriMesh& mesh) : vertices_(mesh.vertices) {}

    int add_vertex(const Vec3& p) {
        vertices_.push_back(p);
        return static_cast<int>(vertices_.size()) - 1;
    }

    int add_face(int a, int b, int c) {
        faces_.push_back({a, b, c});
        return static_cast<int>(faces_.size()) - 1;
    }

    void add_green_pair(int f1, int f2, const std::array<int, 3>& parent, int mid) {
        pairs_.push_back({{f1, f2}, parent, mid});
    }

    RefineState finish() {
        RefineState out;
        out.green_id.assign(faces_.size(), -1);
        for (size_t g = 0; g < pairs_.size(); ++g) {
            out.green_id[pairs_[g].child[0]] = static_cast<int>(g);
            out.green_id[pairs_[g].child[1]] = static_cast<int>(g);
        }
        out.greens = std::move(pairs_);
        out.mesh = build_mesh(std::move(vertices_), std::move(faces_));
        return out;
    }

private:
    std::vector<Vec3> vertices_;
    std::vector<std::array<int, 3>> faces_;
    std::vector<RefineState::GreenPair> pairs_;
};

}  // namespace

RefineState red_green_refine(const RefineState& state, const std::vector<int>& marked,
                             const Placer& placer, const NodalField3* normals) {
    const TriMesh& mesh = state.mesh;

    Splitter splitter(state);
    splitter.run(marked);

    // Placement of the new vertex on every split edge.
    NodalField3 pn_normals;
    if (placer.kind == Placer::Kind::PNSurface && !normals) {
        pn_normals = projected_normals(mesh, placer.fem);
        normals = &pn_normals;
    }

    MeshBuilder builder(mesh);
    std::vector<int> edge_vertex(mesh.n_edges(), -1);
    for (int e = 0; e < mesh.n_edges(); ++e) {
        if (!splitter.edge_split[e]) continue;
        const auto& edge = mesh.edges()[e];
        Vec3 midpoint = (mesh.vertices[edge.v0] + mesh.vertices[edge.v1]) * 0.5;
        Vec3 position = midpoint;
        switch (placer.kind) {
            case Placer::Kind::LinearMidpoint:
                break;
            case Placer::Kind::PNSurface: {
                // Canonical owner: the lower of the two incident faces. The two
                // patches disagree in general; one owner keeps the mesh watertight.
                int owner = std::min(edge.face[0], edge.face[1]);
                const auto& fc = mesh.faces[owner];
                PNPatch patch = pn_control_points(
                    {mesh.vertices[fc[0]], mesh.vertices[fc[1]], mesh.vertices[fc[2]]},
                    {(*normals)[fc[0]], (*normals)[fc[1]], (*normals)[fc[2]]});
                int li = -1, lj = -1;
                for (int c = 0; c < 3; ++c) {
                    if (fc[c] == edge.v0) li = c;
                    if (fc[c] == edge.v1) lj = c;
                }
                position = pn_edge_midpoint(patch, li, lj);
                break;
            }
            case Placer::Kind::ExactProjection: {
                try {
                    position =
                        project_to_surface(*placer.surface, midpoint, placer.projection_tol)
                            .position;
                } catch (const NoConvergence& e) {
                    throw PlacementFailure(std::string("projection placement failed: ") +
                                           e.what());
                }
                break;
            }
        }
        edge_vertex[e] = builder.add_vertex(position);
    }

    auto emit_red = [&](const std::array<int, 3>& fc, const std::array<int, 3>& mids) {
        builder.add_face(fc[0], mids[2], mids[1]);
        builder.add_face(mids[2], fc[1], mids[0]);
        builder.add_face(mids[1], mids[0], fc[2]);
        builder.add_face(mids[2], mids[0], mids[1]);
    };
    // Red child that may carry one pre-existing hanging node on edge (a, b).
    auto emit_child = [&](int a, int b, int c) {
        int e = mesh.find_edge(a, b);
        int mid = e >= 0 ? edge_vertex[e] : -1;
        if (mid >= 0) {
            int f1 = builder.add_face(a, mid, c);
            int f2 = builder.add_face(mid, b, c);
            builder.add_green_pair(f1, f2, {a, b, c}, mid);
        } else {
            builder.add_face(a, b, c);
        }
    };

    for (int f = 0; f < mesh.n_faces(); ++f) {
        const auto& fc = mesh.faces[f];
        int g = state.green_id[f];
        if (g >= 0) {
            if (splitter.pair_promoted[g]) continue;  // handled at pair level below
            if (state.greens[g].child[0] != f) continue;  // emit the pair once
            const auto& pair = state.greens[g];
            int f1 = builder.add_face(pair.parent[0], pair.mid, pair.parent[2]);
            int f2 = builder.add_face(pair.mid, pair.parent[1], pair.parent[2]);
            builder.add_green_pair(f1, f2, pair.parent, pair.mid);
            continue;
        }
        auto face_edges = mesh.face_edges(f);
        if (splitter.face_red[f]) {
            // mids[c] on the edge opposite corner c
            std::array<int, 3> mids = {edge_vertex[face_edges[0]], edge_vertex[face_edges[1]],
                                       edge_vertex[face_edges[2]]};
            emit_red(fc, mids);
            continue;
        }
        int split_count = 0;
        int split_local = -1;
        for (int c = 0; c < 3; ++c) {
            if (splitter.edge_split[face_edges[c]]) {
                ++split_count;
                split_local = c;
            }
        }
        if (split_count == 0) {
            builder.add_face(fc[0], fc[1], fc[2]);
        } else {
            // Exactly one by the closure fixpoint: transitional green bisection.
            const auto& edge = mesh.edges()[face_edges[split_local]];
            auto rotated = rotate_to_edge(fc, edge.v0, edge.v1);
            int mid = edge_vertex[face_edges[split_local]];
            int f1 = builder.add_face(rotated[0], mid, rotated[2]);
            int f2 = builder.add_face(mid, rotated[1], rotated[2]);
            builder.add_green_pair(f1, f2, rotated, mid);
        }
    }

    // Promoted green pairs: recombine the parent (a,b,c) and red-split it with
    // the existing midpoint m of (a,b). The children along the former halves
    // (a,m) and (m,b) can inherit one hanging node each.
    for (size_t g = 0; g < state.greens.size(); ++g) {
        if (!splitter.pair_promoted[g]) continue;
        const auto& pair = state.greens[g];
        int a = pair.parent[0], b = pair.parent[1], c = pair.parent[2];
        int m = pair.mid;
        int m_bc = edge_vertex[mesh.find_edge(b, c)];
        int m_ca = edge_vertex[mesh.find_edge(c, a)];
        emit_child(a, m, m_ca);
        emit_child(m, b, m_bc);
        builder.add_face(m_ca, m_bc, c);
        builder.add_face(m, m_bc, m_ca);
    }

    return builder.finish();
}

AdaptiveResult adaptive_loop(TriMesh mesh, const AdaptiveOptions& options) {
    AdaptiveResult result;
    result.state = make_refine_state(std::move(mesh));

    for (int round = 0;; ++round) {
        const TriMesh& m = result.state.mesh;
        FemOperators ops = assemble_operators(m);
        NodalField3 n_h = projected_normals(m, ops, options.fem);
        std::vector<double> eta = error_indicators(m, ops.frames, n_h);
        double global = global_indicator(eta);

        AdaptiveRound row;
        row.round = round;
        row.n_elements = m.n_faces();
        row.h = mesh_size(m, MeshSizeMode::MeanRootArea).value;
        row.indicator = global;
        if (options.surface) {
            row.eps_geom = geom_error(m, *options.surface, false, options.projection_tol);
            row.effectivity = effectivity_index(m, ops.frames,
                                                exact_vertex_normals(m, *options.surface), n_h);
        }
        result.rounds.push_back(row);

        if (round >= options.max_rounds) break;
        if (options.tol > 0.0 && global <= options.tol) break;

        std::vector<int> marked;
        if (options.mark_all) {
            marked.resize(m.n_faces());
            for (int f = 0; f < m.n_faces(); ++f) marked[f] = f;
        } else {
            double threshold = options.theta * *std::max_element(eta.begin(), eta.end());
            for (int f = 0; f < m.n_faces(); ++f)
                if (eta[f] >= threshold) marked.push_back(f);
        }
        result.state = red_green_refine(result.state, marked, options.placer, &n_h);
    }
    return result;
}

}  // namespace curvkit
