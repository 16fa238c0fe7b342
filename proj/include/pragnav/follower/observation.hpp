#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "pragnav/nn/tensor.hpp"
#include "pragnav/world/nav_graph.hpp"

namespace pragnav::follower {

inline constexpr int kElevations = 3;
inline constexpr int kViewCount = world::kHeadingBins * kElevations;  // 36
inline constexpr int kFrontalView = world::kHeadingBins;  // middle elevation, relative heading 0

// Landmark one-hot followed by [sin psi, cos psi, sin theta, cos theta].
constexpr std::size_t feature_width() { return world::kLandmarkClasses + 4; }

// Panoramic percept at one agent state. View slot i covers relative heading
// (i % 12) * 30 degrees counter-clockwise from the agent's heading, at
// elevation row i / 12 (-30, 0, +30 degrees). Row 0 of `actions` is the zero
// Stop encoding; rows 1..J encode the navigable directions toward `targets`.
struct PanoObservation {
  nn::Tensor views;    // [36, F]
  nn::Tensor actions;  // [1 + J, F]
  std::vector<world::NodeId> targets;

  std::size_t action_count() const { return actions.rows(); }
  world::Action action(std::size_t slot) const;
  std::optional<std::size_t> slot_of(const world::Action& action) const;
};

PanoObservation observe(const world::NavGraph& graph, const world::AgentState& state);

// Same percept with navigable directions presented in `order` (a permutation
// of the graph's sorted neighbor list).
PanoObservation observe(const world::NavGraph& graph, const world::AgentState& state,
                        const std::vector<world::NodeId>& order);

}  // namespace pragnav::follower
