#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace lapmet {

/// Sentinel for the missing second face of a boundary edge.
constexpr int kNoFace = -1;

/// Combinatorial triangulated surface. Edges are kept in canonical order:
/// sorted lexicographically on their (min, max) vertex pair. Meshes produced
/// by double_cover may contain two distinct edges with the same endpoints;
/// ties are broken deterministically there, so edge indexing is always
/// reproducible.
struct MeshConnectivity {
    int vertex_count = 0;
    std::vector<std::array<int, 3>> faces;
    /// Endpoints (lo, hi) per edge, lo < hi except that lo == hi never occurs.
    std::vector<std::array<int, 2>> edges;
    /// Incident faces per edge; edge_faces[e][1] == kNoFace on the boundary.
    std::vector<std::array<int, 2>> edge_faces;
    /// For each face, the edge opposite each of its three corners.
    std::vector<std::array<int, 3>> face_edges;

    int face_count() const { return static_cast<int>(faces.size()); }
    int edge_count() const { return static_cast<int>(edges.size()); }
    bool edge_on_boundary(int e) const { return edge_faces[e][1] == kNoFace; }
};

/// Optional 3D embedding, one coordinate triple per vertex.
struct VertexPositions {
    std::vector<std::array<double, 3>> coords;

    bool empty() const { return coords.empty(); }
    int size() const { return static_cast<int>(coords.size()); }
};

struct LoadedMesh {
    MeshConnectivity mesh;
    VertexPositions positions;
};

/// Builds canonical connectivity from a face list. Throws std::invalid_argument
/// on out-of-range or repeated vertex indices and on non-manifold edges (three
/// or more incident faces).
MeshConnectivity build_connectivity(int vertex_count,
                                    std::vector<std::array<int, 3>> faces);

/// Reads the Wavefront OBJ subset: `v x y z` and `f i j k` records with
/// 1-based indices. Texture/normal suffixes after a slash are ignored; any
/// other record type is skipped. Non-triangular faces are rejected.
LoadedMesh load_obj(std::istream& in);
LoadedMesh load_obj(const std::string& path);

/// Writes the same OBJ subset.
void write_obj(std::ostream& out, const MeshConnectivity& mesh,
               const VertexPositions& positions);

/// Indices of edges with exactly one incident face, ascending.
std::vector<int> boundary_edges(const MeshConnectivity& mesh);

/// V - E + F.
int euler_characteristic(const MeshConnectivity& mesh);

/// True when every vertex is reachable from vertex 0 along edges.
bool is_connected(const MeshConnectivity& mesh);

/// Closed double of a surface with boundary: the mesh glued to an
/// orientation-reversed copy of itself along the boundary. Boundary vertices
/// and boundary edges are shared between the two sheets; interior vertices and
/// edges are duplicated. Two copies of an interior edge keep their endpoint
/// pair when both endpoints lie on the boundary, which is why covers may be
/// multigraphs.
struct DoubleCover {
    MeshConnectivity mesh;
    /// Original edge index -> covering edge indices (one entry for boundary
    /// edges, two for interior edges; sheet-1 copy first).
    std::vector<std::vector<int>> edge_map;
    /// Cover vertex index -> originating vertex of the input mesh.
    std::vector<int> vertex_origin;
};

/// Throws std::invalid_argument when the input is already closed.
DoubleCover double_cover(const MeshConnectivity& mesh);

}  // namespace lapmet
