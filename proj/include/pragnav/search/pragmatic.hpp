#pragma once

#include <vector>

#include <json.hpp>

#include "pragnav/search/search.hpp"
#include "pragnav/speaker/speaker.hpp"

namespace pragnav::search {

struct PragmaticConfig {
  std::size_t k = 40;
  double lambda = 0.95;
  int max_actions = 20;
  bool heading_in_state = true;

  SearchConfig search() const { return {k, max_actions, heading_in_state}; }
};

struct ScoredRoute {
  world::Route route;
  double follower_logprob = 0;
  double speaker_logprob = 0;
  double combined = 0;
  std::size_t order = 0;  // position in the candidate list
};

// Log form of the speaker/follower product: lambda * s + (1 - lambda) * f.
double combined_score(double lambda, double speaker_logprob, double follower_logprob);

// Speaker-scores every candidate; `combined` uses `lambda`.
std::vector<ScoredRoute> score_candidates(const std::vector<SearchRoute>& candidates,
                                          const speaker::SpeakerModel& speaker,
                                          const world::Instruction& instruction, const world::NavGraph& graph,
                                          double lambda);

// Recomputes `combined` for another speaker weight.
void reweight(std::vector<ScoredRoute>& scored, double lambda);

// Index of the best candidate: highest combined, then higher follower score,
// then earlier order. Throws std::invalid_argument when empty.
std::size_t best_index(const std::vector<ScoredRoute>& scored);

ScoredRoute pragmatic_select(const std::vector<SearchRoute>& candidates, const speaker::SpeakerModel& speaker,
                             const world::Instruction& instruction, const world::NavGraph& graph,
                             const PragmaticConfig& config);

nlohmann::json to_json(const ScoredRoute& scored);

}  // namespace pragnav::search
