#include "pragnav/world/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

#include "pragnav/common/random.hpp"
#include "pragnav/world/environment.hpp"

namespace pragnav::world {

std::string_view to_string(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kValSeen: return "val_seen";
    case Split::kValUnseen: return "val_unseen";
  }
  return "?";
}

std::string_view to_string(Provenance provenance) {
  return provenance == Provenance::kOracle ? "oracle" : "speaker_synthetic";
}

Split parse_split(std::string_view text) {
  if (text == "train") return Split::kTrain;
  if (text == "val_seen") return Split::kValSeen;
  if (text == "val_unseen") return Split::kValUnseen;
  throw std::invalid_argument("unknown split: " + std::string(text));
}

Provenance parse_provenance(std::string_view text) {
  if (text == "oracle") return Provenance::kOracle;
  if (text == "speaker_synthetic") return Provenance::kSpeakerSynthetic;
  throw std::invalid_argument("unknown provenance: " + std::string(text));
}

std::vector<DatasetExample> Dataset::split(Split which) const {
  std::vector<DatasetExample> out;
  std::copy_if(examples.begin(), examples.end(), std::back_inserter(out),
               [&](const DatasetExample& e) { return e.split == which; });
  return out;
}

std::vector<int> Dataset::environment_ids(Split which) const {
  std::set<int> ids;
  for (const auto& e : examples) {
    if (e.split == which) ids.insert(e.environment_id);
  }
  return {ids.begin(), ids.end()};
}

namespace {

NavGraph environment_with_routes(const DatasetConfig& config, std::uint64_t seed, int env_id) {
  for (std::uint64_t attempt = 0; attempt < 64; ++attempt) {
    auto graph = generate_environment(derive_seed(derive_seed(seed, env_id), attempt),
                                      config.nodes_per_env, config.ambiguity, env_id);
    if (route_endpoint_pairs(graph).size() >= static_cast<std::size_t>(config.routes_per_env)) {
      return graph;
    }
  }
  throw std::invalid_argument("cannot fit the requested routes per environment");
}

}  // namespace

Dataset build_dataset(const DatasetConfig& config, std::uint64_t seed) {
  const auto& fr = config.splits;
  if (config.num_envs < 3) throw std::invalid_argument("num_envs must be at least 3");
  if (config.routes_per_env < 1) throw std::invalid_argument("routes_per_env must be positive");
  if (fr.val_seen_routes < 0 || fr.val_unseen_envs < 0 || fr.val_seen_routes + fr.val_unseen_envs > 1) {
    throw std::invalid_argument("split fractions must be non-negative and sum to at most 1");
  }
  if (config.train_paraphrases < 1 || config.val_paraphrases < 1) {
    throw std::invalid_argument("paraphrase counts must be positive");
  }
  const int unseen_envs = static_cast<int>(std::lround(fr.val_unseen_envs * config.num_envs));
  const int held_out_routes = static_cast<int>(std::lround(fr.val_seen_routes * config.routes_per_env));
  if (unseen_envs < 1) throw std::invalid_argument("configuration yields an empty val_unseen split");
  if (unseen_envs >= config.num_envs) throw std::invalid_argument("configuration yields an empty train split");
  if (held_out_routes < 1) throw std::invalid_argument("configuration yields an empty val_seen split");
  if (held_out_routes >= config.routes_per_env) {
    throw std::invalid_argument("configuration yields an empty train split");
  }

  Rng split_rng(derive_seed(seed, "splits"));
  std::vector<int> env_order(config.num_envs);
  for (int i = 0; i < config.num_envs; ++i) env_order[i] = i;
  split_rng.shuffle(env_order);
  const std::set<int> unseen(env_order.begin(), env_order.begin() + unseen_envs);

  Dataset data;
  for (int env = 0; env < config.num_envs; ++env) {
    data.environments.push_back(environment_with_routes(config, seed, env));
    const auto& graph = data.environments.back();

    auto pairs = route_endpoint_pairs(graph);
    Rng route_rng(derive_seed(derive_seed(seed, "routes"), env));
    route_rng.shuffle(pairs);
    pairs.resize(config.routes_per_env);

    for (int r = 0; r < config.routes_per_env; ++r) {
      Split split = Split::kTrain;
      if (unseen.contains(env)) {
        split = Split::kValUnseen;
      } else if (r < held_out_routes) {
        split = Split::kValSeen;
      }
      const Route route = route_between(graph, pairs[r].first, pairs[r].second);
      const int paraphrases = split == Split::kTrain ? config.train_paraphrases : config.val_paraphrases;
      for (int p = 0; p < paraphrases; ++p) {
        const auto instr_seed = derive_seed(derive_seed(derive_seed(seed, "instructions"), env),
                                            static_cast<std::uint64_t>(r) * 16 + p);
        data.examples.push_back({route, oracle_instruction(graph, route, instr_seed), env, split,
                                 Provenance::kOracle});
      }
    }
  }
  return data;
}

}  // namespace pragnav::world
