#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "pragnav/world/instructions.hpp"
#include "pragnav/world/nav_graph.hpp"

namespace pragnav::world {

enum class Split { kTrain, kValSeen, kValUnseen };
enum class Provenance { kOracle, kSpeakerSynthetic };

std::string_view to_string(Split split);
std::string_view to_string(Provenance provenance);
Split parse_split(std::string_view text);
Provenance parse_provenance(std::string_view text);

struct DatasetExample {
  Route route;
  Instruction instruction;
  int environment_id = 0;
  Split split = Split::kTrain;
  Provenance provenance = Provenance::kOracle;

  NodeId goal() const { return route.last().node; }

  friend bool operator==(const DatasetExample&, const DatasetExample&) = default;
};

struct SplitFractions {
  double val_seen_routes = 0.1;  // held-out route fraction inside training environments
  double val_unseen_envs = 0.25;  // fraction of environments held out entirely
};

struct DatasetConfig {
  int num_envs = 12;
  int routes_per_env = 60;
  int nodes_per_env = 30;
  double ambiguity = 0.5;
  SplitFractions splits;
  int train_paraphrases = 3;
  int val_paraphrases = 1;
};

// Environments plus the examples drawn from them. Environment ids are the
// indices into `environments`.
struct Dataset {
  std::vector<NavGraph> environments;
  std::vector<DatasetExample> examples;

  const NavGraph& environment(int id) const { return environments.at(id); }
  std::vector<DatasetExample> split(Split which) const;
  std::vector<int> environment_ids(Split which) const;
};

// Generates environments, distinct shortest-path routes and oracle
// instructions, split train / val_seen / val_unseen. Deterministic in
// (config, seed). Throws std::invalid_argument if any split would be empty.
Dataset build_dataset(const DatasetConfig& config, std::uint64_t seed);

}  // namespace pragnav::world
