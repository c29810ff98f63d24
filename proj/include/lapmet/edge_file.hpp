#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <vector>

#include "lapmet/mesh.hpp"

namespace lapmet {

/// One parsed `vi vj value` line, vertex ids 1-based as stored on disk.
struct EdgeValueLine {
    int vi = 0;
    int vj = 0;
    double value = 0.0;
};

/// Text format shared by metric and weight files: one `vi vj value` line per
/// edge in canonical edge order, 1-based ids, 17 significant digits.
void write_edge_values(std::ostream& out, const MeshConnectivity& mesh,
                       const Eigen::VectorXd& values);

/// Reads one value per mesh edge. Repeated endpoint pairs (double-cover
/// multigraphs) are matched to edge indices in file order. Throws
/// std::invalid_argument when a line names a non-edge or coverage is not
/// exactly one value per edge.
Eigen::VectorXd read_edge_values(std::istream& in, const MeshConnectivity& mesh);

/// Mesh-free parse, used when two files are compared directly.
std::vector<EdgeValueLine> read_edge_value_lines(std::istream& in);

}  // namespace lapmet
