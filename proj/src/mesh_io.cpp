#include "curvkit/mesh_io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace curvkit {

namespace {

std::string next_content_line(std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
        size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos) continue;
        if (line[start] == '#') continue;
        return line.substr(start);
    }
    return {};
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string lowercase_extension(const std::string& path) {
    size_t dot = path.find_last_of('.');
    if (dot == std::string::npos) return {};
    std::string ext = path.substr(dot + 1);
    for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return ext;
}

}  // namespace

TriMesh read_off(std::istream& in) {
    std::string header = next_content_line(in);
    std::istringstream hs(header);
    std::string magic;
    hs >> magic;
    if (magic != "OFF") throw IoError("not an OFF file (header '" + magic + "')");

    size_t nv = 0, nf = 0, ne = 0;
    // Counts may follow the magic on the same line.
    if (!(hs >> nv >> nf >> ne)) {
        std::istringstream cs(next_content_line(in));
        if (!(cs >> nv >> nf >> ne)) throw IoError("OFF: malformed count line");
    }

    std::vector<Vec3> verts(nv);
    for (size_t i = 0; i < nv; ++i) {
        std::istringstream ls(next_content_line(in));
        if (!(ls >> verts[i].x >> verts[i].y >> verts[i].z))
            throw IoError("OFF: malformed vertex line " + std::to_string(i));
    }
    std::vector<std::array<int, 3>> faces(nf);
    for (size_t i = 0; i < nf; ++i) {
        std::istringstream ls(next_content_line(in));
        int sides = 0;
        if (!(ls >> sides)) throw IoError("OFF: malformed face line " + std::to_string(i));
        if (sides != 3)
            throw MeshError(MeshError::Code::NotTriangular,
                            "OFF: face " + std::to_string(i) + " has " + std::to_string(sides) +
                                " sides; triangles only");
        if (!(ls >> faces[i][0] >> faces[i][1] >> faces[i][2]))
            throw IoError("OFF: malformed face line " + std::to_string(i));
    }
    return build_mesh(std::move(verts), std::move(faces));
}

TriMesh read_obj(std::istream& in) {
    std::vector<Vec3> verts;
    std::vector<std::array<int, 3>> faces;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;
        if (tag == "v") {
            Vec3 p;
            if (!(ls >> p.x >> p.y >> p.z))
                throw IoError("OBJ: malformed vertex at line " + std::to_string(lineno));
            verts.push_back(p);
        } else if (tag == "f") {
            std::vector<int> idx;
            std::string token;
            while (ls >> token) {
                // "i", "i/t", "i/t/n", "i//n"; the position index comes first.
                size_t slash = token.find('/');
                int i = std::stoi(slash == std::string::npos ? token : token.substr(0, slash));
                if (i < 0) i = static_cast<int>(verts.size()) + i + 1;  // relative index
                idx.push_back(i - 1);
            }
            if (idx.size() != 3)
                throw MeshError(MeshError::Code::NotTriangular,
                                "OBJ: face at line " + std::to_string(lineno) + " has " +
                                    std::to_string(idx.size()) + " sides; triangles only");
            faces.push_back({idx[0], idx[1], idx[2]});
        }
        // all other tags (vn, vt, usemtl, ...) ignored
    }
    return build_mesh(std::move(verts), std::move(faces));
}

void write_off(std::ostream& out, const TriMesh& mesh) {
    out << "OFF\n" << mesh.n_vertices() << " " << mesh.n_faces() << " " << mesh.n_edges() << "\n";
    for (const Vec3& v : mesh.vertices)
        out << fmt(v.x) << " " << fmt(v.y) << " " << fmt(v.z) << "\n";
    for (const auto& f : mesh.faces) out << "3 " << f[0] << " " << f[1] << " " << f[2] << "\n";
}

void write_obj(std::ostream& out, const TriMesh& mesh) {
    for (const Vec3& v : mesh.vertices)
        out << "v " << fmt(v.x) << " " << fmt(v.y) << " " << fmt(v.z) << "\n";
    for (const auto& f : mesh.faces)
        out << "f " << f[0] + 1 << " " << f[1] + 1 << " " << f[2] + 1 << "\n";
}

void write_ply(std::ostream& out, const TriMesh& mesh, const PlyExtras& extras) {
    for (const auto& [name, data] : extras.vertex_scalars)
        if (data.size() != static_cast<size_t>(mesh.n_vertices()))
            throw InvalidParameter("PLY: vertex scalar '" + name + "' has wrong length");
    for (const auto& [name, data] : extras.vertex_vectors)
        if (data.size() != static_cast<size_t>(mesh.n_vertices()))
            throw InvalidParameter("PLY: vertex vector '" + name + "' has wrong length");
    for (const auto& [name, data] : extras.face_scalars)
        if (data.size() != static_cast<size_t>(mesh.n_faces()))
            throw InvalidParameter("PLY: face scalar '" + name + "' has wrong length");

    out << "ply\nformat ascii 1.0\n";
    out << "element vertex " << mesh.n_vertices() << "\n";
    out << "property double x\nproperty double y\nproperty double z\n";
    for (const auto& [name, data] : extras.vertex_vectors) {
        if (name == "normal") {
            out << "property double nx\nproperty double ny\nproperty double nz\n";
        } else {
            out << "property double " << name << "_x\n";
            out << "property double " << name << "_y\n";
            out << "property double " << name << "_z\n";
        }
    }
    for (const auto& [name, data] : extras.vertex_scalars)
        out << "property double " << name << "\n";
    out << "element face " << mesh.n_faces() << "\n";
    out << "property list uchar int vertex_indices\n";
    for (const auto& [name, data] : extras.face_scalars)
        out << "property double " << name << "\n";
    out << "end_header\n";

    for (int i = 0; i < mesh.n_vertices(); ++i) {
        const Vec3& v = mesh.vertices[i];
        out << fmt(v.x) << " " << fmt(v.y) << " " << fmt(v.z);
        for (const auto& [name, data] : extras.vertex_vectors)
            out << " " << fmt(data[i].x) << " " << fmt(data[i].y) << " " << fmt(data[i].z);
        for (const auto& [name, data] : extras.vertex_scalars) out << " " << fmt(data[i]);
        out << "\n";
    }
    for (int f = 0; f < mesh.n_faces(); ++f) {
        const auto& fc = mesh.faces[f];
        out << "3 " << fc[0] << " " << fc[1] << " " << fc[2];
        for (const auto& [name, data] : extras.face_scalars) out << " " << fmt(data[f]);
        out << "\n";
    }
}

TriMesh read_mesh_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::string ext = lowercase_extension(path);
    if (ext == "off") return read_off(in);
    if (ext == "obj") return read_obj(in);
    throw IoError("unsupported input format '." + ext + "' (OFF and OBJ are readable)");
}

void write_mesh_file(const std::string& path, const TriMesh& mesh) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    std::string ext = lowercase_extension(path);
    if (ext == "off")
        write_off(out, mesh);
    else if (ext == "obj")
        write_obj(out, mesh);
    else if (ext == "ply")
        write_ply(out, mesh);
    else
        throw IoError("unsupported output format '." + ext + "'");
    if (!out) throw IoError("write to '" + path + "' failed");
}

void write_ply_file(const std::string& path, const TriMesh& mesh, const PlyExtras& extras) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    write_ply(out, mesh, extras);
    if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace curvkit
