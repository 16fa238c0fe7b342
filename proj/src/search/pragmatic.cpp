#include "pragnav/search/pragmatic.hpp"

#include <stdexcept>

#include "pragnav/world/serialization.hpp"

namespace pragnav::search {

double combined_score(double lambda, double speaker_logprob, double follower_logprob) {
  // Keep the unused term out entirely at the endpoints so -inf * 0 cannot
  // produce NaN.
  if (lambda == 0.0) return follower_logprob;
  if (lambda == 1.0) return speaker_logprob;
  return lambda * speaker_logprob + (1.0 - lambda) * follower_logprob;
}

std::vector<ScoredRoute> score_candidates(const std::vector<SearchRoute>& candidates,
                                          const speaker::SpeakerModel& speaker,
                                          const world::Instruction& instruction, const world::NavGraph& graph,
                                          double lambda) {
  std::vector<ScoredRoute> out;
  out.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    ScoredRoute s;
    s.route = candidates[i].route;
    s.follower_logprob = candidates[i].score;
    s.speaker_logprob = speaker::speaker_logprob(speaker, graph, instruction, s.route);
    s.combined = combined_score(lambda, s.speaker_logprob, s.follower_logprob);
    s.order = i;
    out.push_back(std::move(s));
  }
  return out;
}

void reweight(std::vector<ScoredRoute>& scored, double lambda) {
  for (auto& s : scored) s.combined = combined_score(lambda, s.speaker_logprob, s.follower_logprob);
}

std::size_t best_index(const std::vector<ScoredRoute>& scored) {
  if (scored.empty()) throw std::invalid_argument("pragmatic_select: no candidates");
  std::size_t best = 0;
  for (std::size_t i = 1; i < scored.size(); ++i) {
    const auto& a = scored[i];
    const auto& b = scored[best];
    if (a.combined != b.combined) {
      if (a.combined > b.combined) best = i;
    } else if (a.follower_logprob != b.follower_logprob) {
      if (a.follower_logprob > b.follower_logprob) best = i;
    } else if (a.order < b.order) {
      best = i;
    }
  }
  return best;
}

ScoredRoute pragmatic_select(const std::vector<SearchRoute>& candidates, const speaker::SpeakerModel& speaker,
                             const world::Instruction& instruction, const world::NavGraph& graph,
                             const PragmaticConfig& config) {
  if (config.k < 1) throw std::invalid_argument("pragmatic config: K must be at least 1");
  if (!(config.lambda >= 0.0 && config.lambda <= 1.0)) throw std::invalid_argument("pragmatic config: lambda outside [0, 1]");
  auto scored = score_candidates(candidates, speaker, instruction, graph, config.lambda);
  return scored[best_index(scored)];
}

nlohmann::json to_json(const ScoredRoute& scored) {
  return {{"route", world::route_to_json(scored.route)},
          {"follower_logprob", scored.follower_logprob},
          {"speaker_logprob", scored.speaker_logprob},
          {"combined", scored.combined},
          {"order", scored.order}};
}

}  // namespace pragnav::search
