#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pragnav/world/nav_graph.hpp"
#include "pragnav/world/vocabulary.hpp"

namespace pragnav::world {

// Token ids, always terminated by EOS.
struct Instruction {
  std::vector<int> tokens;

  friend bool operator==(const Instruction&, const Instruction&) = default;
};

std::optional<std::string> instruction_error(const Instruction& instruction, const Vocabulary& vocab);

enum class Maneuver { kForward, kLeft, kRight, kAround, kStop };

// Relative turn implied by leaving a state with heading bin `heading` in the
// direction of heading bin `travel`.
Maneuver maneuver_for(int heading, int travel);

// Landmark at `node` whose placement is closest to the centre of `heading`'s
// frontal cone, if any is inside the cone. Ties go to the lower class id.
std::optional<int> visible_landmark(const NavGraph& graph, NodeId node, int heading);

struct Clause {
  Maneuver maneuver = Maneuver::kStop;
  std::optional<int> landmark;

  friend bool operator==(const Clause&, const Clause&) = default;
};

// Semantic content of the oracle description: one clause per move and a
// closing Stop clause.
std::vector<Clause> route_clauses(const NavGraph& graph, const Route& route);

// Template-based description of `route`; `seed` picks among synonymous
// templates for each clause.
Instruction oracle_instruction(const NavGraph& graph, const Route& route, std::uint64_t seed,
                               const Vocabulary& vocab = Vocabulary::standard());

// Inverse of the template bank. Throws std::invalid_argument on text the
// templates cannot produce.
std::vector<Clause> parse_instruction(const Instruction& instruction,
                                      const Vocabulary& vocab = Vocabulary::standard());

// Number of synonymous surface forms per (maneuver, landmark presence).
int template_variants();

}  // namespace pragnav::world
