#include "lapmet/mesh.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

namespace lapmet {

namespace {

std::array<int, 2> sorted_pair(int a, int b) {
    return a < b ? std::array<int, 2>{a, b} : std::array<int, 2>{b, a};
}

[[noreturn]] void throw_nonmanifold(const std::array<int, 2>& e) {
    throw std::invalid_argument("non-manifold edge (" + std::to_string(e[0]) +
                                ", " + std::to_string(e[1]) +
                                "): more than two incident faces");
}

}  // namespace

MeshConnectivity build_connectivity(int vertex_count,
                                    std::vector<std::array<int, 3>> faces) {
    if (vertex_count <= 0) {
        throw std::invalid_argument("mesh must have at least one vertex");
    }
    for (std::size_t f = 0; f < faces.size(); ++f) {
        const auto& [i, j, k] = faces[f];
        for (int v : {i, j, k}) {
            if (v < 0 || v >= vertex_count) {
                throw std::invalid_argument(
                    "face " + std::to_string(f) + " references vertex " +
                    std::to_string(v) + " outside [0, " +
                    std::to_string(vertex_count) + ")");
            }
        }
        if (i == j || j == k || i == k) {
            throw std::invalid_argument("face " + std::to_string(f) +
                                        " has repeated vertices");
        }
    }

    MeshConnectivity mesh;
    mesh.vertex_count = vertex_count;
    mesh.faces = std::move(faces);

    // Canonical edge list: unique (lo, hi) pairs in lexicographic order.
    std::map<std::array<int, 2>, int> edge_index;
    for (const auto& [i, j, k] : mesh.faces) {
        edge_index.emplace(sorted_pair(j, k), 0);
        edge_index.emplace(sorted_pair(i, k), 0);
        edge_index.emplace(sorted_pair(i, j), 0);
    }
    mesh.edges.reserve(edge_index.size());
    for (auto& [pair, idx] : edge_index) {
        idx = static_cast<int>(mesh.edges.size());
        mesh.edges.push_back(pair);
    }

    mesh.edge_faces.assign(mesh.edges.size(), {kNoFace, kNoFace});
    mesh.face_edges.resize(mesh.faces.size());
    for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
        const auto& [i, j, k] = mesh.faces[f];
        // Opposite-edge convention: corner 0 (vertex i) faces edge (j, k).
        const std::array<std::array<int, 2>, 3> opposite = {
            sorted_pair(j, k), sorted_pair(i, k), sorted_pair(i, j)};
        for (int c = 0; c < 3; ++c) {
            const int e = edge_index.at(opposite[c]);
            mesh.face_edges[f][c] = e;
            auto& incident = mesh.edge_faces[e];
            if (incident[0] == kNoFace) {
                incident[0] = static_cast<int>(f);
            } else if (incident[1] == kNoFace) {
                incident[1] = static_cast<int>(f);
            } else {
                throw_nonmanifold(mesh.edges[e]);
            }
        }
    }
    return mesh;
}

LoadedMesh load_obj(std::istream& in) {
    std::vector<std::array<double, 3>> coords;
    std::vector<std::array<int, 3>> faces;

    std::string line;
    int face_record = 0;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;
        if (tag == "v") {
            std::array<double, 3> p{};
            if (!(ls >> p[0] >> p[1] >> p[2])) {
                throw std::invalid_argument("malformed vertex record: " + line);
            }
            coords.push_back(p);
        } else if (tag == "f") {
            std::vector<int> ids;
            std::string field;
            while (ls >> field) {
                // "i", "i/t" and "i/t/n" all use the part before the slash.
                const auto slash = field.find('/');
                int idx = 0;
                try {
                    idx = std::stoi(field.substr(0, slash));
                } catch (const std::exception&) {
                    throw std::invalid_argument("malformed face record: " + line);
                }
                ids.push_back(idx);
            }
            if (ids.size() != 3) {
                throw std::invalid_argument("non-triangular face at face record " +
                                            std::to_string(face_record));
            }
            for (int& idx : ids) {
                if (idx <= 0 || idx > static_cast<int>(coords.size())) {
                    throw std::invalid_argument(
                        "face record " + std::to_string(face_record) +
                        " references vertex " + std::to_string(idx) +
                        " but file defines " + std::to_string(coords.size()));
                }
                idx -= 1;  // OBJ is 1-based
            }
            faces.push_back({ids[0], ids[1], ids[2]});
            ++face_record;
        }
        // all other record types skipped
    }
    if (coords.empty()) {
        throw std::invalid_argument("OBJ contains no vertices");
    }

    LoadedMesh out;
    out.mesh = build_connectivity(static_cast<int>(coords.size()), std::move(faces));
    out.positions.coords = std::move(coords);
    return out;
}

LoadedMesh load_obj(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open OBJ file: " + path);
    }
    return load_obj(in);
}

void write_obj(std::ostream& out, const MeshConnectivity& mesh,
               const VertexPositions& positions) {
    if (positions.size() != mesh.vertex_count) {
        throw std::invalid_argument("positions do not match vertex count");
    }
    char buf[128];
    for (const auto& p : positions.coords) {
        std::snprintf(buf, sizeof(buf), "v %.17g %.17g %.17g\n", p[0], p[1], p[2]);
        out << buf;
    }
    for (const auto& [i, j, k] : mesh.faces) {
        out << "f " << i + 1 << ' ' << j + 1 << ' ' << k + 1 << '\n';
    }
}

std::vector<int> boundary_edges(const MeshConnectivity& mesh) {
    std::vector<int> out;
    for (int e = 0; e < mesh.edge_count(); ++e) {
        if (mesh.edge_on_boundary(e)) out.push_back(e);
    }
    return out;
}

int euler_characteristic(const MeshConnectivity& mesh) {
    return mesh.vertex_count - mesh.edge_count() + mesh.face_count();
}

bool is_connected(const MeshConnectivity& mesh) {
    if (mesh.vertex_count == 0) return false;
    std::vector<std::vector<int>> adjacency(mesh.vertex_count);
    for (const auto& [a, b] : mesh.edges) {
        adjacency[a].push_back(b);
        adjacency[b].push_back(a);
    }
    std::vector<char> seen(mesh.vertex_count, 0);
    std::vector<int> stack = {0};
    seen[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int w : adjacency[v]) {
            if (!seen[w]) {
                seen[w] = 1;
                ++reached;
                stack.push_back(w);
            }
        }
    }
    return reached == mesh.vertex_count;
}

DoubleCover double_cover(const MeshConnectivity& mesh) {
    const auto bedges = boundary_edges(mesh);
    if (bedges.empty()) {
        throw std::invalid_argument("double cover requires boundary");
    }

    const int n = mesh.vertex_count;
    std::vector<char> on_boundary(n, 0);
    for (int e : bedges) {
        on_boundary[mesh.edges[e][0]] = 1;
        on_boundary[mesh.edges[e][1]] = 1;
    }

    // Boundary vertices are shared between the sheets; interior vertices get
    // a mirror copy appended after the originals.
    std::vector<int> mirror_vertex(n);
    std::vector<int> origin;
    origin.reserve(n);
    for (int v = 0; v < n; ++v) origin.push_back(v);
    int next = n;
    for (int v = 0; v < n; ++v) {
        if (on_boundary[v]) {
            mirror_vertex[v] = v;
        } else {
            mirror_vertex[v] = next++;
            origin.push_back(v);
        }
    }

    const int nf = mesh.face_count();
    std::vector<std::array<int, 3>> faces = mesh.faces;
    faces.reserve(2 * nf);
    for (const auto& [i, j, k] : mesh.faces) {
        // Mirrored sheet reverses orientation.
        faces.push_back({mirror_vertex[i], mirror_vertex[k], mirror_vertex[j]});
    }

    // Cover edges remember their source edge so that two copies of an
    // interior edge stay distinct even when their endpoint pairs coincide.
    struct CoverEdge {
        std::array<int, 2> endpoints;
        int source_edge;
        int sheet;  // 0 = shared/sheet-1, 1 = mirror copy
    };
    std::vector<CoverEdge> cover_edges;
    std::vector<int> sheet1_of(mesh.edge_count());  // edge -> cover list index
    std::vector<int> sheet2_of(mesh.edge_count(), -1);
    for (int e = 0; e < mesh.edge_count(); ++e) {
        const auto [a, b] = mesh.edges[e];
        sheet1_of[e] = static_cast<int>(cover_edges.size());
        cover_edges.push_back({sorted_pair(a, b), e, 0});
        if (!mesh.edge_on_boundary(e)) {
            sheet2_of[e] = static_cast<int>(cover_edges.size());
            cover_edges.push_back(
                {sorted_pair(mirror_vertex[a], mirror_vertex[b]), e, 1});
        }
    }

    std::vector<int> order(cover_edges.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int x, int y) {
        const auto& ex = cover_edges[x];
        const auto& ey = cover_edges[y];
        if (ex.endpoints != ey.endpoints) return ex.endpoints < ey.endpoints;
        if (ex.source_edge != ey.source_edge) return ex.source_edge < ey.source_edge;
        return ex.sheet < ey.sheet;
    });
    std::vector<int> rank(cover_edges.size());
    for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = static_cast<int>(i);

    DoubleCover out;
    out.vertex_origin = std::move(origin);
    out.mesh.vertex_count = next;
    out.mesh.faces = std::move(faces);
    out.mesh.edges.resize(cover_edges.size());
    for (std::size_t i = 0; i < cover_edges.size(); ++i) {
        out.mesh.edges[rank[i]] = cover_edges[i].endpoints;
    }

    out.mesh.face_edges.resize(2 * nf);
    for (int f = 0; f < nf; ++f) {
        const auto& fe = mesh.face_edges[f];
        for (int c = 0; c < 3; ++c) {
            out.mesh.face_edges[f][c] = rank[sheet1_of[fe[c]]];
        }
        // Mirror face {i, k, j}: corner 0 still faces the mirror of edge
        // (j, k); corners 1 and 2 swap roles with the reversed orientation.
        const auto mirror_of = [&](int e) {
            return rank[mesh.edge_on_boundary(e) ? sheet1_of[e] : sheet2_of[e]];
        };
        out.mesh.face_edges[nf + f][0] = mirror_of(fe[0]);
        out.mesh.face_edges[nf + f][1] = mirror_of(fe[2]);
        out.mesh.face_edges[nf + f][2] = mirror_of(fe[1]);
    }

    out.mesh.edge_faces.assign(cover_edges.size(), {kNoFace, kNoFace});
    for (int f = 0; f < 2 * nf; ++f) {
        for (int c = 0; c < 3; ++c) {
            auto& incident = out.mesh.edge_faces[out.mesh.face_edges[f][c]];
            if (incident[0] == kNoFace) {
                incident[0] = f;
            } else if (incident[1] == kNoFace) {
                incident[1] = f;
            } else {
                throw_nonmanifold(out.mesh.edges[out.mesh.face_edges[f][c]]);
            }
        }
    }

    out.edge_map.resize(mesh.edge_count());
    for (int e = 0; e < mesh.edge_count(); ++e) {
        out.edge_map[e].push_back(rank[sheet1_of[e]]);
        if (sheet2_of[e] >= 0) out.edge_map[e].push_back(rank[sheet2_of[e]]);
    }
    return out;
}

}  // namespace lapmet
