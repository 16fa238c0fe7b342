#pragma once

#include <vector>

#include "pragnav/follower/follower.hpp"
#include "pragnav/search/search.hpp"

namespace pragnav::search {

// Drives search and greedy decoding with a trained follower for one
// instruction. Successors come in action-slot order (Stop first).
class FollowerPolicy {
 public:
  using Memory = follower::FollowerSession::Memory;

  FollowerPolicy(const follower::FollowerModel& model, const world::NavGraph& graph,
                 const world::Instruction& instruction);

  Memory start() const { return session_.start(); }
  std::vector<Successor<Memory>> expand(const Memory& memory, const world::AgentState& state) const;

 private:
  follower::FollowerSession session_;
  const world::NavGraph* graph_;
};

static_assert(SearchPolicy<FollowerPolicy>);

world::Route follower_greedy(const follower::FollowerModel& model, const world::NavGraph& graph,
                             const world::Instruction& instruction, const world::AgentState& start,
                             int max_actions = 20);

SearchResult follower_search(const follower::FollowerModel& model, const world::NavGraph& graph,
                             const world::Instruction& instruction, const world::AgentState& start,
                             const SearchConfig& config);

}  // namespace pragnav::search
