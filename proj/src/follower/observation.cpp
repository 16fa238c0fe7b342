#include "pragnav/follower/observation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pragnav::follower {

using world::Action;
using world::NodeId;

namespace {

void write_orientation(nn::Real* row, double psi, double theta) {
  row[world::kLandmarkClasses + 0] = std::sin(psi);
  row[world::kLandmarkClasses + 1] = std::cos(psi);
  row[world::kLandmarkClasses + 2] = std::sin(theta);
  row[world::kLandmarkClasses + 3] = std::cos(theta);
}

}  // namespace

Action PanoObservation::action(std::size_t slot) const {
  if (slot == 0) return Action::stop();
  return Action::move(targets.at(slot - 1));
}

std::optional<std::size_t> PanoObservation::slot_of(const Action& action) const {
  if (action.is_stop()) return 0;
  const auto it = std::find(targets.begin(), targets.end(), action.target);
  if (it == targets.end()) return std::nullopt;
  return static_cast<std::size_t>(it - targets.begin()) + 1;
}

PanoObservation observe(const world::NavGraph& graph, const world::AgentState& state) {
  const auto neighbors = graph.neighbors(state.node);
  return observe(graph, state, {neighbors.begin(), neighbors.end()});
}

PanoObservation observe(const world::NavGraph& graph, const world::AgentState& state,
                        const std::vector<NodeId>& order) {
  const std::size_t width = feature_width();
  PanoObservation obs;
  obs.views = nn::Tensor({static_cast<std::size_t>(kViewCount), width});
  const double heading = world::bin_angle(state.heading);
  const auto landmarks = graph.landmarks_at(state.node);

  for (int row = 0; row < kElevations; ++row) {
    const double theta = (row - 1) * world::kHeadingStep;
    for (int k = 0; k < world::kHeadingBins; ++k) {
      nn::Real* view = obs.views.data() + (row * world::kHeadingBins + k) * width;
      write_orientation(view, world::wrap_angle(k * world::kHeadingStep), theta);
      if (row != 1) continue;  // planar worlds: landmarks sit at eye level
      const int absolute = (state.heading + k) % world::kHeadingBins;
      for (const auto& lm : landmarks) {
        if (world::heading_bin(lm.placement_heading) == absolute) view[lm.landmark_class] = 1;
      }
    }
  }

  obs.actions = nn::Tensor({order.size() + 1, width});
  obs.targets = order;
  for (std::size_t j = 0; j < order.size(); ++j) {
    if (!graph.adjacent(state.node, order[j])) throw std::invalid_argument("observe: target is not a neighbor");
    nn::Real* u = obs.actions.data() + (j + 1) * width;
    const double travel = graph.direction(state.node, order[j]);
    write_orientation(u, world::wrap_angle(travel - heading), 0.0);
    const int travel_bin = world::heading_bin(travel);
    for (const auto& lm : landmarks) {
      if (world::heading_bin(lm.placement_heading) == travel_bin) u[lm.landmark_class] = 1;
    }
  }
  return obs;
}

}  // namespace pragnav::follower
