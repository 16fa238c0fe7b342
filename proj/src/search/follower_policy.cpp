#include "pragnav/search/follower_policy.hpp"

namespace pragnav::search {

FollowerPolicy::FollowerPolicy(const follower::FollowerModel& model, const world::NavGraph& graph,
                               const world::Instruction& instruction)
    : session_(model, instruction), graph_(&graph) {}

std::vector<Successor<FollowerPolicy::Memory>> FollowerPolicy::expand(const Memory& memory,
                                                                      const world::AgentState& state) const {
  const auto step = session_.step(memory, *graph_, state);
  std::vector<Successor<Memory>> out;
  out.reserve(step.log_probs.size());
  for (std::size_t slot = 0; slot < step.log_probs.size(); ++slot) {
    out.push_back({step.obs.action(slot), step.log_probs[slot], follower::FollowerSession::after(step, slot)});
  }
  return out;
}

world::Route follower_greedy(const follower::FollowerModel& model, const world::NavGraph& graph,
                             const world::Instruction& instruction, const world::AgentState& start,
                             int max_actions) {
  FollowerPolicy policy(model, graph, instruction);
  return greedy_follow(policy, graph, start, max_actions);
}

SearchResult follower_search(const follower::FollowerModel& model, const world::NavGraph& graph,
                             const world::Instruction& instruction, const world::AgentState& start,
                             const SearchConfig& config) {
  FollowerPolicy policy(model, graph, instruction);
  return state_factored_search(policy, graph, start, config);
}

}  // namespace pragnav::search
