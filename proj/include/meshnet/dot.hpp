#pragma once

#include <optional>
#include <string>
#include <vector>

#include "meshnet/mesh.hpp"

namespace meshnet {

// Renders the mesh as a DOT digraph: one cluster per subnet, node labels from
// payload text, edge labels "label, label (weight)". Undirected connections
// render without arrowheads; connections of more than two endpoints go
// through a point-shaped junction node. `scope` limits the output to the
// listed subnets (an explicitly empty list is a valid, empty graph); no scope
// means the whole mesh.
std::string export_dot(const Mesh& mesh,
                       const std::optional<std::vector<SubnetId>>& scope =
                           std::nullopt);

void export_dot_file(const Mesh& mesh, const std::string& path,
                     const std::optional<std::vector<SubnetId>>& scope =
                         std::nullopt);

}  // namespace meshnet
