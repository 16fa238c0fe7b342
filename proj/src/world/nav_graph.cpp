#include "pragnav/world/nav_graph.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>
#include <stdexcept>

namespace pragnav::world {

NavGraph::NavGraph(int environment_id, std::vector<Vec2> positions,
                   const std::vector<std::pair<NodeId, NodeId>>& edges,
                   std::vector<std::vector<Landmark>> landmarks)
    : environment_id_(environment_id),
      positions_(std::move(positions)),
      adjacency_(positions_.size()),
      landmarks_(std::move(landmarks)) {
  landmarks_.resize(positions_.size());
  if (landmarks_.size() != positions_.size()) {
    throw std::invalid_argument("landmark table larger than node count");
  }
  for (auto [a, b] : edges) {
    if (!contains(a) || !contains(b)) throw std::invalid_argument("edge references unknown node");
    if (a == b) throw std::invalid_argument("self-loop edge");
    if (adjacent(a, b)) throw std::invalid_argument("duplicate edge");
    adjacency_[a].push_back(b);
    adjacency_[b].push_back(a);
  }
  for (auto& list : adjacency_) std::sort(list.begin(), list.end());
}

bool NavGraph::adjacent(NodeId a, NodeId b) const {
  if (!contains(a) || !contains(b)) return false;
  const auto& list = adjacency_[a];
  return std::find(list.begin(), list.end(), b) != list.end();
}

double NavGraph::direction(NodeId from, NodeId to) const {
  return world::direction(position(from), position(to));
}

double NavGraph::edge_length(NodeId a, NodeId b) const {
  return distance(position(a), position(b));
}

std::vector<std::pair<NodeId, NodeId>> NavGraph::edges() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  for (NodeId a = 0; a < static_cast<NodeId>(size()); ++a) {
    for (NodeId b : adjacency_[a]) {
      if (a < b) out.emplace_back(a, b);
    }
  }
  return out;
}

std::vector<int> NavGraph::hop_distances(NodeId source) const {
  std::vector<int> dist(size(), -1);
  std::deque<NodeId> queue{source};
  dist.at(source) = 0;
  while (!queue.empty()) {
    const NodeId node = queue.front();
    queue.pop_front();
    for (NodeId next : adjacency_[node]) {
      if (dist[next] < 0) {
        dist[next] = dist[node] + 1;
        queue.push_back(next);
      }
    }
  }
  return dist;
}

std::vector<std::string> NavGraph::invariant_violations() const {
  std::vector<std::string> problems;
  auto report = [&](auto&&... parts) {
    std::ostringstream os;
    (os << ... << parts);
    problems.push_back(os.str());
  };
  if (size() == 0) {
    report("graph is empty");
    return problems;
  }
  const auto reach = hop_distances(0);
  if (std::count(reach.begin(), reach.end(), -1) > 0) report("graph is not connected");
  for (std::size_t a = 0; a < size(); ++a) {
    const auto degree = adjacency_[a].size();
    if (degree < 1 || degree > 4) report("node ", a, " has degree ", degree);
    for (std::size_t b = a + 1; b < size(); ++b) {
      if (positions_[a] == positions_[b]) report("nodes ", a, " and ", b, " share a position");
    }
    for (NodeId b : adjacency_[a]) {
      const double len = edge_length(static_cast<NodeId>(a), b);
      if (len < 1.5 || len > 2.5) report("edge ", a, "-", b, " has length ", len);
    }
    for (const auto& lm : landmarks_[a]) {
      if (lm.landmark_class < 0 || lm.landmark_class >= kLandmarkClasses) {
        report("node ", a, " has landmark class ", lm.landmark_class);
      }
    }
  }
  return problems;
}

std::size_t Route::move_count() const {
  return static_cast<std::size_t>(
      std::count_if(actions.begin(), actions.end(), [](const Action& a) { return !a.is_stop(); }));
}

AgentState transition(const NavGraph& graph, const AgentState& state, const Action& action) {
  if (action.is_stop()) return {state.node, state.heading, true};
  if (!graph.adjacent(state.node, action.target)) throw std::invalid_argument("transition: target is not a neighbor");
  return {action.target, heading_bin(graph.direction(state.node, action.target)), false};
}

std::optional<std::string> route_error(const NavGraph& graph, const Route& route) {
  if (route.states.empty()) return "route has no states";
  if (route.actions.size() + 1 != route.states.size()) return "action count must be state count - 1";
  if (!graph.contains(route.start().node)) return "start node not in graph";
  for (std::size_t t = 0; t < route.actions.size(); ++t) {
    const auto& here = route.states[t];
    const auto& action = route.actions[t];
    if (here.completed) return "route continues after Stop";
    if (!action.is_stop() && !graph.adjacent(here.node, action.target)) {
      std::ostringstream os;
      os << "step " << t << " moves along a missing edge " << here.node << "->" << action.target;
      return os.str();
    }
    if (transition(graph, here, action) != route.states[t + 1]) {
      std::ostringstream os;
      os << "state " << t + 1 << " does not follow from action " << t;
      return os.str();
    }
  }
  const bool ends_with_stop = !route.actions.empty() && route.actions.back().is_stop();
  if (ends_with_stop != route.last().completed) return "last action is Stop iff final state completed";
  return std::nullopt;
}

std::vector<NodeId> route_nodes(const Route& route) {
  std::vector<NodeId> nodes;
  for (const auto& s : route.states) {
    if (nodes.empty() || nodes.back() != s.node) nodes.push_back(s.node);
  }
  return nodes;
}

double path_length(const NavGraph& graph, const Route& route) {
  double total = 0.0;
  for (std::size_t t = 0; t < route.actions.size(); ++t) {
    if (!route.actions[t].is_stop()) {
      total += graph.edge_length(route.states[t].node, route.actions[t].target);
    }
  }
  return total;
}

Route route_from_nodes(const NavGraph& graph, const std::vector<NodeId>& nodes) {
  if (nodes.empty()) throw std::invalid_argument("route needs at least one node");
  Route route;
  const int start_heading = nodes.size() > 1 ? heading_bin(graph.direction(nodes[0], nodes[1])) : 0;
  route.states.push_back({nodes[0], start_heading, false});
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (!graph.adjacent(nodes[i - 1], nodes[i])) {
      throw std::invalid_argument("route nodes are not adjacent");
    }
    const auto action = Action::move(nodes[i]);
    route.states.push_back(transition(graph, route.last(), action));
    route.actions.push_back(action);
  }
  route.states.push_back(transition(graph, route.last(), Action::stop()));
  route.actions.push_back(Action::stop());
  return route;
}

std::vector<NodeId> shortest_path(const NavGraph& graph, NodeId from, NodeId to) {
  // Walking greedily toward the target through the smallest-id neighbor that
  // is one hop closer yields the lexicographically smallest shortest path.
  const auto to_goal = graph.hop_distances(to);
  if (to_goal.at(from) < 0) return {};
  std::vector<NodeId> path{from};
  while (path.back() != to) {
    const NodeId here = path.back();
    for (NodeId next : graph.neighbors(here)) {
      if (to_goal[next] == to_goal[here] - 1) {
        path.push_back(next);
        break;
      }
    }
  }
  return path;
}

}  // namespace pragnav::world
