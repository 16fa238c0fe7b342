#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "pragnav/world/nav_graph.hpp"

namespace pragnav::search {

struct SearchConfig {
  std::size_t k = 40;
  int max_actions = 20;
  // Key states by (node, heading, completed); false drops the heading.
  bool heading_in_state = true;
};

template <typename Memory>
struct Successor {
  world::Action action;
  double log_prob = 0;
  Memory memory;
};

// A scorer the search can drive: start() gives the memory at the start
// state, expand(memory, state) one successor per legal action there.
template <typename P>
concept SearchPolicy = requires(const P& p, const typename P::Memory& m, const world::AgentState& s) {
  { p.start() } -> std::convertible_to<typename P::Memory>;
  { p.expand(m, s) } -> std::convertible_to<std::vector<Successor<typename P::Memory>>>;
};

struct SearchRoute {
  world::Route route;
  double score = 0;            // summed log-probability
  std::vector<double> prefix;  // score after each action
  std::size_t order = 0;       // creation index; lower is earlier
};

struct SearchStats {
  std::size_t expansions = 0;
  std::size_t replacements = 0;
  std::vector<std::string> violations;  // monotonicity / strict-replacement breaches
};

struct SearchResult {
  std::vector<SearchRoute> completed;      // in the order they were selected
  std::vector<world::Route> expansion_trace;  // every selected route, in order
  SearchStats stats;
};

namespace detail {

using Key = std::tuple<world::NodeId, int, bool>;

inline Key key_of(const world::AgentState& s, bool heading) {
  return {s.node, heading ? s.heading : -1, s.completed};
}

}  // namespace detail

// Best-first search over routes where partial routes compete per state.
// Each iteration selects the highest-scoring unexpanded route (ties: created
// first). A selected partial route is expanded by every legal action; a
// successor is cached for its end state only if the state is new or the
// successor scores strictly higher than the cached route. A selected
// completed route is final and counts toward K. At max_actions - 1 actions
// only Stop is legal.
template <SearchPolicy Policy>
SearchResult state_factored_search(const Policy& policy, const world::NavGraph& graph,
                                   const world::AgentState& start, const SearchConfig& config) {
  using Memory = typename Policy::Memory;
  struct Node {
    int parent = -1;
    world::AgentState state;
    world::Action action;  // action that produced this node
    int actions = 0;
    double score = 0;
    Memory memory;
    bool expanded = false;
  };

  SearchResult result;
  std::vector<Node> nodes;
  std::map<detail::Key, int> partial;
  std::map<detail::Key, int> completed;

  auto build_route = [&](int id) {
    std::vector<int> chain;
    for (int n = id; n >= 0; n = nodes[n].parent) chain.push_back(n);
    SearchRoute out;
    out.order = static_cast<std::size_t>(id);
    out.score = nodes[id].score;
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      out.route.states.push_back(nodes[*it].state);
      if (nodes[*it].parent >= 0) {
        out.route.actions.push_back(nodes[*it].action);
        out.prefix.push_back(nodes[*it].score);
      }
    }
    return out;
  };

  nodes.push_back({-1, start, world::Action::stop(), 0, 0.0, policy.start(), false});
  auto& start_cache = start.completed ? completed : partial;
  start_cache[detail::key_of(start, config.heading_in_state)] = 0;

  std::size_t finalized = 0;
  while (finalized < config.k) {
    int best = -1;
    auto consider = [&](const std::map<detail::Key, int>& cache) {
      for (const auto& [_, id] : cache) {
        if (nodes[id].expanded) continue;
        if (best < 0 || nodes[id].score > nodes[best].score ||
            (nodes[id].score == nodes[best].score && id < best)) {
          best = id;
        }
      }
    };
    consider(partial);
    consider(completed);
    if (best < 0) break;

    nodes[best].expanded = true;
    ++result.stats.expansions;
    result.expansion_trace.push_back(build_route(best).route);
    if (nodes[best].state.completed) {
      result.completed.push_back(build_route(best));
      ++finalized;
      continue;
    }

    const Node parent = nodes[best];
    auto successors = policy.expand(parent.memory, parent.state);
    for (auto& succ : successors) {
      if (parent.actions >= config.max_actions - 1 && !succ.action.is_stop()) continue;
      Node child;
      child.parent = best;
      child.state = world::transition(graph, parent.state, succ.action);
      child.action = succ.action;
      child.actions = parent.actions + 1;
      child.score = parent.score + succ.log_prob;
      child.memory = std::move(succ.memory);
      if (!(child.score <= parent.score) && !std::isnan(child.score)) {
        result.stats.violations.push_back("score increased from " + std::to_string(parent.score) + " to " +
                                          std::to_string(child.score));
      }
      auto& cache = child.state.completed ? completed : partial;
      const auto key = detail::key_of(child.state, config.heading_in_state);
      auto it = cache.find(key);
      if (it == cache.end() || nodes[it->second].score < child.score) {
        if (it != cache.end()) {
          ++result.stats.replacements;
          if (!(child.score > nodes[it->second].score)) {
            result.stats.violations.push_back("non-improving replacement");
          }
        }
        nodes.push_back(std::move(child));
        cache[key] = static_cast<int>(nodes.size()) - 1;
      }
    }
  }
  return result;
}

// Argmax action at every step until Stop; ties go to the lowest navigable
// direction, with Stop ranked after every move. Stop is forced at the cap.
template <SearchPolicy Policy>
world::Route greedy_follow(const Policy& policy, const world::NavGraph& graph, const world::AgentState& start,
                           int max_actions = 20) {
  world::Route route;
  route.states.push_back(start);
  auto memory = policy.start();
  auto state = start;
  while (!state.completed) {
    auto successors = policy.expand(memory, state);
    const bool capped = static_cast<int>(route.actions.size()) >= max_actions - 1;
    int best = -1;
    auto better = [&](int i) {
      return best < 0 || successors[i].log_prob > successors[best].log_prob;
    };
    for (int i = 0; i < static_cast<int>(successors.size()); ++i) {
      if (!capped && !successors[i].action.is_stop() && better(i)) best = i;
    }
    for (int i = 0; i < static_cast<int>(successors.size()); ++i) {
      if (successors[i].action.is_stop() && better(i)) best = i;
    }
    world::Action action = best >= 0 ? successors[best].action : world::Action::stop();
    if (best >= 0) memory = std::move(successors[best].memory);
    state = world::transition(graph, state, action);
    route.actions.push_back(action);
    route.states.push_back(state);
  }
  return route;
}

}  // namespace pragnav::search
