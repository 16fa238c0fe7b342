#include "pragnav/pipeline/sequential.hpp"

#include <stdexcept>

namespace pragnav::pipeline {

using world::AgentState;
using world::NodeId;

world::Route sequential_challenge_trajectory(const std::vector<world::Route>& expansion_trace,
                                             const world::Route& selected, const world::NavGraph& graph) {
  if (selected.states.empty()) throw std::invalid_argument("sequential trajectory: empty selected route");
  const AgentState start = selected.start();
  std::vector<NodeId> walk{start.node};
  auto visit = [&](NodeId n) {
    if (walk.back() != n) walk.push_back(n);
  };

  std::vector<AgentState> current{start};
  for (const auto& next : expansion_trace) {
    if (next.states.empty() || next.start() != start) {
      throw std::invalid_argument("sequential trajectory: trace route does not begin at the start state");
    }
    std::size_t common = 0;
    while (common < current.size() && common < next.states.size() && current[common] == next.states[common]) {
      ++common;
    }
    for (std::size_t i = current.size() - 1; i + 1 > common && i > 0; --i) visit(current[i - 1].node);
    for (std::size_t i = common; i < next.states.size(); ++i) visit(next.states[i].node);
    current = next.states;
  }

  const auto tail = world::shortest_path(graph, walk.back(), selected.last().node);
  if (tail.empty()) throw std::invalid_argument("sequential trajectory: selected end unreachable");
  for (std::size_t i = 1; i < tail.size(); ++i) visit(tail[i]);

  world::Route out;
  out.states.push_back(start);
  for (std::size_t i = 1; i < walk.size(); ++i) {
    const auto action = world::Action::move(walk[i]);
    out.actions.push_back(action);
    out.states.push_back(world::transition(graph, out.states.back(), action));
  }
  out.actions.push_back(world::Action::stop());
  out.states.push_back(world::transition(graph, out.states.back(), world::Action::stop()));
  return out;
}

}  // namespace pragnav::pipeline
