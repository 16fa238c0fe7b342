#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pragnav/world/geometry.hpp"

namespace pragnav::world {

inline constexpr int kLandmarkClasses = 24;

using NodeId = int;

struct Landmark {
  int landmark_class = 0;
  double placement_heading = 0.0;  // global frame, radians

  friend bool operator==(const Landmark&, const Landmark&) = default;
};

// Undirected navigation graph with positioned nodes and landmark placements.
// Node ids are dense: 0..size()-1. Neighbor lists are kept sorted so every
// traversal that iterates them is deterministic.
class NavGraph {
 public:
  NavGraph() = default;
  NavGraph(int environment_id, std::vector<Vec2> positions,
           const std::vector<std::pair<NodeId, NodeId>>& edges,
           std::vector<std::vector<Landmark>> landmarks);

  int environment_id() const { return environment_id_; }
  std::size_t size() const { return positions_.size(); }

  Vec2 position(NodeId node) const { return positions_.at(node); }
  std::span<const NodeId> neighbors(NodeId node) const { return adjacency_.at(node); }
  std::span<const Landmark> landmarks_at(NodeId node) const { return landmarks_.at(node); }
  bool adjacent(NodeId a, NodeId b) const;
  bool contains(NodeId node) const {
    return node >= 0 && static_cast<std::size_t>(node) < size();
  }

  double direction(NodeId from, NodeId to) const;
  double edge_length(NodeId a, NodeId b) const;

  // Each undirected edge once, as (low, high), sorted.
  std::vector<std::pair<NodeId, NodeId>> edges() const;

  // Hop distances from `source`; unreachable nodes get -1.
  std::vector<int> hop_distances(NodeId source) const;

  // Human-readable descriptions of every violated environment invariant
  // (connectivity, spacing, degree bounds, landmark classes). Empty when valid.
  std::vector<std::string> invariant_violations() const;

  friend bool operator==(const NavGraph&, const NavGraph&) = default;

 private:
  int environment_id_ = 0;
  std::vector<Vec2> positions_;
  std::vector<std::vector<NodeId>> adjacency_;
  std::vector<std::vector<Landmark>> landmarks_;
};

struct AgentState {
  NodeId node = 0;
  int heading = 0;  // heading bin in [0, 12)
  bool completed = false;

  friend auto operator<=>(const AgentState&, const AgentState&) = default;
};

struct Action {
  enum class Kind { kMove, kStop };

  Kind kind = Kind::kStop;
  NodeId target = -1;  // neighbor reached by a move; -1 for Stop

  static Action stop() { return {}; }
  static Action move(NodeId target) { return {Kind::kMove, target}; }
  bool is_stop() const { return kind == Kind::kStop; }

  friend bool operator==(const Action&, const Action&) = default;
};

struct Route {
  std::vector<AgentState> states;
  std::vector<Action> actions;

  const AgentState& start() const { return states.front(); }
  const AgentState& last() const { return states.back(); }
  std::size_t move_count() const;

  friend bool operator==(const Route&, const Route&) = default;
};

// State reached by taking `action` in `state`. Moves face the direction of
// travel; Stop keeps position and heading and marks the route completed.
AgentState transition(const NavGraph& graph, const AgentState& state, const Action& action);

// Checks route structure against the graph; returns the first problem found.
std::optional<std::string> route_error(const NavGraph& graph, const Route& route);

// Sequence of nodes visited, with the Stop step's repeated node dropped.
std::vector<NodeId> route_nodes(const Route& route);

// Sum of traversed edge lengths.
double path_length(const NavGraph& graph, const Route& route);

// Builds a Stop-terminated route along `nodes` (consecutive nodes adjacent).
// The start heading faces the second node; later states carry the heading of
// the move that reached them.
Route route_from_nodes(const NavGraph& graph, const std::vector<NodeId>& nodes);

// Hop-shortest path from `from` to `to`; among equal-length paths the
// lexicographically smallest node sequence. Empty when unreachable.
std::vector<NodeId> shortest_path(const NavGraph& graph, NodeId from, NodeId to);

}  // namespace pragnav::world
