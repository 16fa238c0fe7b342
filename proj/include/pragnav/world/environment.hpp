#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "pragnav/world/nav_graph.hpp"

namespace pragnav::world {

inline constexpr int kMinEnvironmentSize = 8;
inline constexpr int kMinRouteNodes = 5;
inline constexpr int kMaxRouteNodes = 7;

// Grows a random planar navigation graph of `size` nodes and scatters
// landmarks over it. `ambiguity` is the fraction of used landmark classes that
// are placed at two distinct nodes. Deterministic in (seed, size, ambiguity).
NavGraph generate_environment(std::uint64_t seed, int size, double ambiguity,
                              int environment_id = 0);

// Ordered (start, goal) pairs whose shortest path has 5-7 nodes.
std::vector<std::pair<NodeId, NodeId>> route_endpoint_pairs(const NavGraph& graph);

// Shortest-path route between a seeded choice of qualifying endpoints.
// Throws std::runtime_error when the graph has no qualifying pair.
Route sample_route(const NavGraph& graph, std::uint64_t seed);

Route route_between(const NavGraph& graph, NodeId start, NodeId goal);

}  // namespace pragnav::world
