#include "pragnav/world/instructions.hpp"

#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "pragnav/common/random.hpp"

namespace pragnav::world {
namespace {

// "X" marks the landmark slot.
struct TemplateSet {
  std::array<const char*, 3> with_landmark;
  std::array<const char*, 3> plain;
};

const TemplateSet& templates_for(Maneuver m) {
  static const TemplateSet forward{{"go forward to the X", "walk straight toward the X", "continue ahead to the X"},
                                   {"go forward", "walk straight", "continue ahead"}};
  static const TemplateSet left{{"turn left toward the X", "go left to the X", "make a left toward the X"},
                                {"turn left", "go left", "make a left"}};
  static const TemplateSet right{{"turn right toward the X", "go right to the X", "make a right toward the X"},
                                 {"turn right", "go right", "make a right"}};
  static const TemplateSet around{{"turn around toward the X", "go back to the X", "head back toward the X"},
                                  {"turn around", "go back", "head back"}};
  static const TemplateSet stop{{"stop at the X", "wait at the X", "stop near the X"},
                                {"stop", "wait there", "stop there"}};
  switch (m) {
    case Maneuver::kForward: return forward;
    case Maneuver::kLeft: return left;
    case Maneuver::kRight: return right;
    case Maneuver::kAround: return around;
    case Maneuver::kStop: return stop;
  }
  throw std::logic_error("unknown maneuver");
}

std::vector<std::string> split_words(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> words;
  std::string w;
  while (in >> w) words.push_back(w);
  return words;
}

std::vector<std::string> render(const Clause& clause, int variant) {
  const auto& set = templates_for(clause.maneuver);
  auto words = split_words(clause.landmark ? set.with_landmark[variant] : set.plain[variant]);
  for (auto& w : words) {
    if (w == "X") w = landmark_names().at(*clause.landmark);
  }
  return words;
}

std::optional<Clause> match_clause(const std::vector<std::string>& words) {
  constexpr std::array<Maneuver, 5> all = {Maneuver::kForward, Maneuver::kLeft, Maneuver::kRight,
                                           Maneuver::kAround, Maneuver::kStop};
  for (Maneuver m : all) {
    const auto& set = templates_for(m);
    for (const char* form : set.plain) {
      if (split_words(form) == words) return Clause{m, std::nullopt};
    }
    for (const char* form : set.with_landmark) {
      const auto pattern = split_words(form);
      if (pattern.size() != words.size()) continue;
      std::optional<int> landmark;
      bool ok = true;
      for (std::size_t i = 0; i < pattern.size() && ok; ++i) {
        if (pattern[i] == "X") {
          const auto& names = landmark_names();
          for (std::size_t c = 0; c < names.size(); ++c) {
            if (names[c] == words[i]) landmark = static_cast<int>(c);
          }
          ok = landmark.has_value();
        } else {
          ok = pattern[i] == words[i];
        }
      }
      if (ok) return Clause{m, landmark};
    }
  }
  return std::nullopt;
}

}  // namespace

int template_variants() { return 3; }

std::optional<std::string> instruction_error(const Instruction& instruction, const Vocabulary& vocab) {
  const auto& t = instruction.tokens;
  if (t.empty() || t.back() != kEos) return "instruction must end with EOS";
  if (t.size() > static_cast<std::size_t>(kMaxInstructionTokens)) return "instruction longer than 60 tokens";
  for (int id : t) {
    if (id < 0 || id >= vocab.size()) return "token id outside vocabulary";
  }
  return std::nullopt;
}

Maneuver maneuver_for(int heading, int travel) {
  const int rel = ((travel - heading) % kHeadingBins + kHeadingBins) % kHeadingBins;
  if (rel <= 1 || rel == 11) return Maneuver::kForward;
  if (rel <= 4) return Maneuver::kLeft;
  if (rel >= 8) return Maneuver::kRight;
  return Maneuver::kAround;
}

std::optional<int> visible_landmark(const NavGraph& graph, NodeId node, int heading) {
  std::optional<int> best;
  double best_offset = 0.0;
  for (const auto& lm : graph.landmarks_at(node)) {
    if (!in_frontal_cone(lm.placement_heading, heading)) continue;
    const double offset = std::abs(wrap_angle(lm.placement_heading - bin_angle(heading)));
    if (!best || offset < best_offset || (offset == best_offset && lm.landmark_class < *best)) {
      best = lm.landmark_class;
      best_offset = offset;
    }
  }
  return best;
}

std::vector<Clause> route_clauses(const NavGraph& graph, const Route& route) {
  std::vector<Clause> clauses;
  for (std::size_t t = 0; t < route.actions.size(); ++t) {
    const auto& action = route.actions[t];
    if (action.is_stop()) continue;
    const auto& here = route.states[t];
    const int travel = heading_bin(graph.direction(here.node, action.target));
    clauses.push_back({maneuver_for(here.heading, travel), visible_landmark(graph, here.node, travel)});
  }
  const auto& last = route.last();
  clauses.push_back({Maneuver::kStop, visible_landmark(graph, last.node, last.heading)});
  return clauses;
}

Instruction oracle_instruction(const NavGraph& graph, const Route& route, std::uint64_t seed,
                               const Vocabulary& vocab) {
  if (const auto err = route_error(graph, route)) throw std::invalid_argument(*err);
  Instruction out;
  const auto clauses = route_clauses(graph, route);
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    Rng rng(derive_seed(seed, i));
    const int variant = static_cast<int>(rng.below(template_variants()));
    for (const auto& w : render(clauses[i], variant)) out.tokens.push_back(vocab.id(w));
    out.tokens.push_back(vocab.id("."));
  }
  out.tokens.push_back(kEos);
  if (const auto err = instruction_error(out, vocab)) throw std::logic_error(*err);
  return out;
}

std::vector<Clause> parse_instruction(const Instruction& instruction, const Vocabulary& vocab) {
  std::vector<Clause> clauses;
  std::vector<std::string> words;
  const int period = vocab.id(".");
  for (int id : instruction.tokens) {
    if (id == kEos) break;
    if (id == period) {
      const auto clause = match_clause(words);
      if (!clause) {
        std::string text;
        for (const auto& w : words) text += (text.empty() ? "" : " ") + w;
        throw std::invalid_argument("unparseable clause: " + text);
      }
      clauses.push_back(*clause);
      words.clear();
    } else {
      words.push_back(vocab.word(id));
    }
  }
  if (!words.empty()) throw std::invalid_argument("instruction does not end with a clause separator");
  if (clauses.empty() || clauses.back().maneuver != Maneuver::kStop) {
    throw std::invalid_argument("instruction must close with a stop clause");
  }
  return clauses;
}

}  // namespace pragnav::world
