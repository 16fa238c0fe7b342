#pragma once

#include <vector>

#include "pragnav/world/nav_graph.hpp"

namespace pragnav::pipeline {

// One physically walkable trajectory that visits every route the search
// selected, in selection order. Between consecutive routes the walk backs up
// along the current route to the end of the longest common state prefix and
// then follows the next route forward. It finishes with a shortest path to
// the end of `selected` and a Stop.
world::Route sequential_challenge_trajectory(const std::vector<world::Route>& expansion_trace,
                                             const world::Route& selected, const world::NavGraph& graph);

}  // namespace pragnav::pipeline
