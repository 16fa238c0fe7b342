#include "pragnav/world/environment.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <numbers>
#include <stdexcept>

#include "pragnav/common/random.hpp"

namespace pragnav::world {
namespace {

constexpr double kMinSeparation = 1.5;
constexpr double kMinEdgeSpread = std::numbers::pi / 4;  // between edges at one node
constexpr double kLoopEdgeProbability = 0.3;
constexpr double kEdgeAlignedLandmarkProbability = 0.75;

struct Builder {
  std::vector<Vec2> positions;
  std::vector<std::vector<NodeId>> adjacency;
  std::vector<std::pair<NodeId, NodeId>> edges;

  bool direction_free(NodeId node, double angle) const {
    for (NodeId other : adjacency[node]) {
      const double existing = direction(positions[node], positions[other]);
      if (std::abs(wrap_angle(angle - existing)) < kMinEdgeSpread) return false;
    }
    return true;
  }

  bool far_from_all(Vec2 p) const {
    return std::all_of(positions.begin(), positions.end(),
                       [&](Vec2 q) { return distance(p, q) >= kMinSeparation; });
  }

  void connect(NodeId a, NodeId b) {
    adjacency[a].push_back(b);
    adjacency[b].push_back(a);
    edges.emplace_back(a, b);
  }
};

void grow_nodes(Builder& b, int size, Rng& rng) {
  b.positions.push_back({0.0, 0.0});
  b.adjacency.emplace_back();
  int attempts = 0;
  while (static_cast<int>(b.positions.size()) < size) {
    if (++attempts > 200000) throw std::runtime_error("environment growth did not converge");
    std::vector<NodeId> open;
    for (NodeId n = 0; n < static_cast<NodeId>(b.positions.size()); ++n) {
      if (b.adjacency[n].size() < 4) open.push_back(n);
    }
    const NodeId parent = open[rng.below(open.size())];
    const double angle = rng.uniform(-std::numbers::pi, std::numbers::pi);
    const double length = rng.uniform(1.8, 2.2);
    const Vec2 from = b.positions[parent];
    const Vec2 candidate{from.x + length * std::cos(angle), from.y + length * std::sin(angle)};
    if (!b.direction_free(parent, angle) || !b.far_from_all(candidate)) continue;
    const auto child = static_cast<NodeId>(b.positions.size());
    b.positions.push_back(candidate);
    b.adjacency.emplace_back();
    b.connect(parent, child);
  }
}

void add_loop_edges(Builder& b, Rng& rng) {
  const auto n = static_cast<NodeId>(b.positions.size());
  for (NodeId a = 0; a < n; ++a) {
    for (NodeId c = a + 1; c < n; ++c) {
      const double len = distance(b.positions[a], b.positions[c]);
      if (len < 1.6 || len > 2.4) continue;
      if (std::find(b.adjacency[a].begin(), b.adjacency[a].end(), c) != b.adjacency[a].end()) continue;
      if (b.adjacency[a].size() >= 4 || b.adjacency[c].size() >= 4) continue;
      if (!b.direction_free(a, direction(b.positions[a], b.positions[c]))) continue;
      if (!b.direction_free(c, direction(b.positions[c], b.positions[a]))) continue;
      if (rng.bernoulli(kLoopEdgeProbability)) b.connect(a, c);
    }
  }
}

// Picks a placement heading at `node` whose heading sector holds no landmark
// yet, preferring the direction of one of the node's edges.
std::optional<double> free_placement(const Builder& b, const std::vector<std::vector<Landmark>>& placed,
                                     NodeId node, Rng& rng) {
  std::array<bool, kHeadingBins> taken{};
  for (const auto& lm : placed[node]) taken[heading_bin(lm.placement_heading)] = true;

  std::vector<double> edge_headings;
  for (NodeId other : b.adjacency[node]) {
    const double angle = direction(b.positions[node], b.positions[other]);
    if (!taken[heading_bin(angle)]) edge_headings.push_back(angle);
  }
  if (!edge_headings.empty() && rng.bernoulli(kEdgeAlignedLandmarkProbability)) {
    return edge_headings[rng.below(edge_headings.size())];
  }
  std::vector<int> free_bins;
  for (int bin = 0; bin < kHeadingBins; ++bin) {
    if (!taken[bin]) free_bins.push_back(bin);
  }
  if (free_bins.empty()) return std::nullopt;
  const int bin = free_bins[rng.below(free_bins.size())];
  return wrap_angle(bin_angle(bin) + rng.uniform(-0.2, 0.2));
}

std::vector<std::vector<Landmark>> place_landmarks(const Builder& b, double ambiguity, Rng& rng) {
  const int size = static_cast<int>(b.positions.size());
  const int budget = static_cast<int>(std::ceil(1.5 * size));
  auto duplicated_for = [&](int used) { return static_cast<int>(std::ceil(ambiguity * used - 1e-9)); };
  int used = std::min(kLandmarkClasses, budget);
  while (used > 0 && used + duplicated_for(used) > budget) --used;
  const int duplicated = duplicated_for(used);

  std::vector<int> classes(kLandmarkClasses);
  for (int c = 0; c < kLandmarkClasses; ++c) classes[c] = c;
  rng.shuffle(classes);

  std::vector<std::vector<Landmark>> placed(size);
  for (int k = 0; k < used; ++k) {
    const int copies = k < duplicated ? 2 : 1;
    std::vector<NodeId> hosts;
    while (static_cast<int>(hosts.size()) < copies) {
      const auto node = static_cast<NodeId>(rng.below(size));
      if (std::find(hosts.begin(), hosts.end(), node) != hosts.end()) continue;
      const auto heading = free_placement(b, placed, node, rng);
      if (!heading) continue;
      placed[node].push_back({classes[k], *heading});
      hosts.push_back(node);
    }
  }
  return placed;
}

}  // namespace

NavGraph generate_environment(std::uint64_t seed, int size, double ambiguity, int environment_id) {
  if (size < kMinEnvironmentSize) {
    throw std::invalid_argument("environment size must be at least 8 nodes");
  }
  if (!(ambiguity >= 0.0 && ambiguity <= 1.0)) {
    throw std::invalid_argument("ambiguity_level must lie in [0, 1]");
  }
  Rng rng(derive_seed(seed, "environment"));
  Builder builder;
  grow_nodes(builder, size, rng);
  add_loop_edges(builder, rng);
  auto landmarks = place_landmarks(builder, ambiguity, rng);
  return NavGraph(environment_id, std::move(builder.positions), builder.edges, std::move(landmarks));
}

std::vector<std::pair<NodeId, NodeId>> route_endpoint_pairs(const NavGraph& graph) {
  std::vector<std::pair<NodeId, NodeId>> pairs;
  for (NodeId a = 0; a < static_cast<NodeId>(graph.size()); ++a) {
    const auto dist = graph.hop_distances(a);
    for (NodeId b = 0; b < static_cast<NodeId>(graph.size()); ++b) {
      if (dist[b] >= kMinRouteNodes - 1 && dist[b] <= kMaxRouteNodes - 1) pairs.emplace_back(a, b);
    }
  }
  return pairs;
}

Route route_between(const NavGraph& graph, NodeId start, NodeId goal) {
  const auto path = shortest_path(graph, start, goal);
  if (path.empty()) throw std::runtime_error("goal unreachable from start");
  return route_from_nodes(graph, path);
}

Route sample_route(const NavGraph& graph, std::uint64_t seed) {
  const auto pairs = route_endpoint_pairs(graph);
  if (pairs.empty()) throw std::runtime_error("graph has no node pair 5-7 nodes apart");
  Rng rng(derive_seed(seed, "route"));
  const auto [start, goal] = pairs[rng.below(pairs.size())];
  return route_between(graph, start, goal);
}

}  // namespace pragnav::world
