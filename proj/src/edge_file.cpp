#include "lapmet/edge_file.hpp"

#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

namespace lapmet {

void write_edge_values(std::ostream& out, const MeshConnectivity& mesh,
                       const Eigen::VectorXd& values) {
    if (values.size() != mesh.edge_count()) {
        throw std::invalid_argument("value count does not match edge count");
    }
    char buf[96];
    for (int e = 0; e < mesh.edge_count(); ++e) {
        std::snprintf(buf, sizeof(buf), "%d %d %.17g\n", mesh.edges[e][0] + 1,
                      mesh.edges[e][1] + 1, values[e]);
        out << buf;
    }
}

std::vector<EdgeValueLine> read_edge_value_lines(std::istream& in) {
    std::vector<EdgeValueLine> lines;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        EdgeValueLine rec;
        if (!(ls >> rec.vi >> rec.vj >> rec.value)) {
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            throw std::invalid_argument("malformed edge value line: " + line);
        }
        lines.push_back(rec);
    }
    return lines;
}

Eigen::VectorXd read_edge_values(std::istream& in, const MeshConnectivity& mesh) {
    // Edges with the same endpoint pair are consumed in canonical order as
    // duplicate lines appear, so multigraph covers round-trip too.
    std::map<std::array<int, 2>, std::vector<int>> by_pair;
    for (int e = 0; e < mesh.edge_count(); ++e) {
        by_pair[mesh.edges[e]].push_back(e);
    }
    std::map<std::array<int, 2>, std::size_t> consumed;

    Eigen::VectorXd values(mesh.edge_count());
    int assigned = 0;
    for (const auto& rec : read_edge_value_lines(in)) {
        const int a = std::min(rec.vi, rec.vj) - 1;
        const int b = std::max(rec.vi, rec.vj) - 1;
        const auto it = by_pair.find({a, b});
        if (it == by_pair.end()) {
            throw std::invalid_argument("file names edge (" +
                                        std::to_string(rec.vi) + ", " +
                                        std::to_string(rec.vj) +
                                        ") which is not in the mesh");
        }
        auto& used = consumed[it->first];
        if (used >= it->second.size()) {
            throw std::invalid_argument("file repeats edge (" +
                                        std::to_string(rec.vi) + ", " +
                                        std::to_string(rec.vj) + ")");
        }
        values[it->second[used++]] = rec.value;
        ++assigned;
    }
    if (assigned != mesh.edge_count()) {
        throw std::invalid_argument("file covers " + std::to_string(assigned) +
                                    " of " + std::to_string(mesh.edge_count()) +
                                    " edges");
    }
    return values;
}

}  // namespace lapmet
