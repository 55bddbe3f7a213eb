#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "curvkit/fem.hpp"
#include "curvkit/mesh.hpp"

namespace curvkit {

// Triangles only; polygons with more than 3 sides are rejected.
TriMesh read_off(std::istream& in);
TriMesh read_obj(std::istream& in);

void write_off(std::ostream& out, const TriMesh& mesh);
void write_obj(std::ostream& out, const TriMesh& mesh);

// Optional per-vertex / per-face fields exported alongside the geometry.
struct PlyExtras {
    std::vector<std::pair<std::string, std::span<const double>>> vertex_scalars;
    // A vector field adds properties <name>_x, <name>_y, <name>_z; the name
    // "normal" maps to the conventional nx, ny, nz.
    std::vector<std::pair<std::string, std::span<const Vec3>>> vertex_vectors;
    std::vector<std::pair<std::string, std::span<const double>>> face_scalars;
};

void write_ply(std::ostream& out, const TriMesh& mesh, const PlyExtras& extras = {});

// Extension dispatch (.off / .obj to read; .off / .obj / .ply to write).
TriMesh read_mesh_file(const std::string& path);
void write_mesh_file(const std::string& path, const TriMesh& mesh);
void write_ply_file(const std::string& path, const TriMesh& mesh, const PlyExtras& extras = {});

}  // namespace curvkit
