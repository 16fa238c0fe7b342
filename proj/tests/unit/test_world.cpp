#include <doctest.h>

#include <cmath>
#include <deque>
#include <filesystem>
#include <set>

#include "pragnav/world/dataset.hpp"
#include "pragnav/world/environment.hpp"
#include "pragnav/world/serialization.hpp"

using namespace pragnav;
using namespace pragnav::world;

namespace {

// 0 - 1 - 2
// |       |
// 3 - 4 - 5     unit spacing 2, node 4 has a landmark facing +y
NavGraph ladder() {
  std::vector<Vec2> pos{{0, 2}, {2, 2}, {4, 2}, {0, 0}, {2, 0}, {4, 0}};
  std::vector<std::pair<NodeId, NodeId>> edges{{0, 1}, {1, 2}, {0, 3}, {2, 5}, {3, 4}, {4, 5}};
  std::vector<std::vector<Landmark>> lms(6);
  lms[4].push_back({7, std::numbers::pi / 2});
  lms[5].push_back({9, std::numbers::pi / 2});
  return NavGraph(0, pos, edges, lms);
}

std::vector<int> bfs(const NavGraph& g, NodeId s) {
  std::vector<int> d(g.size(), -1);
  std::deque<NodeId> q{s};
  d[s] = 0;
  while (!q.empty()) {
    auto u = q.front();
    q.pop_front();
    for (auto v : g.neighbors(u)) {
      if (d[v] < 0) {
        d[v] = d[u] + 1;
        q.push_back(v);
      }
    }
  }
  return d;
}

}  // namespace

TEST_CASE("heading bins and angles") {
  CHECK(heading_bin(0.0) == 0);
  CHECK(heading_bin(std::numbers::pi / 2) == 3);
  CHECK(heading_bin(std::numbers::pi) == 6);
  CHECK(heading_bin(-std::numbers::pi / 2) == 9);
  CHECK(wrap_angle(3 * std::numbers::pi) == doctest::Approx(std::numbers::pi));
  CHECK(in_frontal_cone(std::numbers::pi / 4, 0));
  CHECK_FALSE(in_frontal_cone(std::numbers::pi / 3, 0));
}

TEST_CASE("maneuvers from relative bins") {
  CHECK(maneuver_for(0, 0) == Maneuver::kForward);
  CHECK(maneuver_for(0, 1) == Maneuver::kForward);
  CHECK(maneuver_for(0, 3) == Maneuver::kLeft);
  CHECK(maneuver_for(0, 9) == Maneuver::kRight);
  CHECK(maneuver_for(0, 6) == Maneuver::kAround);
  CHECK(maneuver_for(11, 2) == Maneuver::kLeft);
}

TEST_CASE("transitions face the direction of travel") {
  auto g = ladder();
  AgentState s{0, 0, false};
  auto t = transition(g, s, Action::move(1));
  CHECK(t.node == 1);
  CHECK(t.heading == 0);
  auto west = transition(g, t, Action::move(0));
  CHECK(west.heading == 6);
  auto south = transition(g, AgentState{2, 0, false}, Action::move(5));
  CHECK(south.heading == 9);
  auto stop = transition(g, south, Action::stop());
  CHECK(stop.completed);
  CHECK(stop.node == 5);
  CHECK(stop.heading == 9);
  CHECK_THROWS(transition(g, s, Action::move(4)));
}

TEST_CASE("shortest path matches BFS and prefers the smallest sequence") {
  auto g = ladder();
  auto p = shortest_path(g, 1, 4);
  CHECK(p == std::vector<NodeId>{1, 0, 3, 4});  // ties with 1-2-5-4
  for (NodeId a = 0; a < 6; ++a) {
    auto d = bfs(g, a);
    CHECK(g.hop_distances(a) == d);
    for (NodeId b = 0; b < 6; ++b) CHECK(static_cast<int>(shortest_path(g, a, b).size()) == d[b] + 1);
  }
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto env = generate_environment(seed, 30, 0.5);
    auto d = bfs(env, 0);
    for (NodeId b = 0; b < static_cast<NodeId>(env.size()); ++b) {
      auto path = shortest_path(env, 0, b);
      REQUIRE(static_cast<int>(path.size()) == d[b] + 1);
      for (std::size_t i = 1; i < path.size(); ++i) CHECK(env.adjacent(path[i - 1], path[i]));
    }
  }
}

TEST_CASE("route helpers") {
  auto g = ladder();
  auto r = route_from_nodes(g, {3, 4, 5, 2});
  CHECK(r.actions.size() == 4);
  CHECK(r.actions.back().is_stop());
  CHECK(r.move_count() == 3);
  CHECK(r.last().completed);
  CHECK(route_nodes(r) == std::vector<NodeId>{3, 4, 5, 2});
  CHECK(path_length(g, r) == doctest::Approx(6.0));
  CHECK_FALSE(route_error(g, r).has_value());
  auto broken = r;
  broken.states[2].node = 0;
  CHECK(route_error(g, broken).has_value());
}

TEST_CASE("visible landmark needs the frontal cone") {
  auto g = ladder();
  CHECK(visible_landmark(g, 4, 3) == 7);
  CHECK(visible_landmark(g, 4, 2) == 7);
  CHECK_FALSE(visible_landmark(g, 4, 0).has_value());
  CHECK_FALSE(visible_landmark(g, 1, 3).has_value());
}

TEST_CASE("generated environments satisfy invariants and are deterministic") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto g = generate_environment(seed, 20 + static_cast<int>(seed), 0.5, 3);
    CHECK(g.invariant_violations().empty());
    CHECK(g.environment_id() == 3);
    CHECK(g == generate_environment(seed, 20 + static_cast<int>(seed), 0.5, 3));
    auto pairs = route_endpoint_pairs(g);
    for (auto [s, t] : pairs) {
      auto n = shortest_path(g, s, t).size();
      CHECK(n >= kMinRouteNodes);
      CHECK(n <= kMaxRouteNodes);
    }
  }
  CHECK_FALSE(generate_environment(1, 30, 0.5) == generate_environment(2, 30, 0.5));
}

TEST_CASE("ambiguity duplicates landmark classes") {
  auto count_dups = [](const NavGraph& g) {
    std::map<int, std::set<NodeId>> where;
    for (NodeId n = 0; n < static_cast<NodeId>(g.size()); ++n) {
      for (auto& lm : g.landmarks_at(n)) where[lm.landmark_class].insert(n);
    }
    int dups = 0;
    for (auto& [c, nodes] : where) dups += nodes.size() > 1;
    return dups;
  };
  CHECK(count_dups(generate_environment(4, 30, 0.0)) == 0);
  CHECK(count_dups(generate_environment(4, 30, 1.0)) > 0);
}

TEST_CASE("vocabulary reserves special ids and round-trips") {
  const auto& v = Vocabulary::standard();
  CHECK(v.word(kPad) == "<pad>");
  CHECK(v.id("no-such-word") == kUnk);
  auto ids = v.encode("turn left");
  CHECK(v.decode(ids) == "turn left");
  CHECK(v.size() <= 128);
}

TEST_CASE("oracle instruction: hand-built example") {
  auto g = ladder();
  // east along the bottom, then a left turn at 5 toward the landmark north of it
  auto r = route_from_nodes(g, {3, 4, 5, 2});
  auto clauses = route_clauses(g, r);
  REQUIRE(clauses.size() == 4);
  CHECK(clauses[0] == Clause{Maneuver::kForward, std::nullopt});
  CHECK(clauses[1] == Clause{Maneuver::kForward, std::nullopt});  // 7 sits outside the cone
  CHECK(clauses[2] == Clause{Maneuver::kLeft, 9});
  CHECK(clauses[3] == Clause{Maneuver::kStop, std::nullopt});
}

TEST_CASE("oracle instructions parse back to their clauses") {
  const auto& vocab = Vocabulary::standard();
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto g = generate_environment(seed, 30, 0.5);
    auto r = sample_route(g, seed);
    auto clauses = route_clauses(g, r);
    std::set<std::vector<int>> surface;
    for (std::uint64_t s = 0; s < 8; ++s) {
      auto ins = oracle_instruction(g, r, s);
      CHECK_FALSE(instruction_error(ins, vocab).has_value());
      CHECK(ins.tokens.back() == kEos);
      CHECK(static_cast<int>(ins.tokens.size()) <= kMaxInstructionTokens);
      CHECK(parse_instruction(ins) == clauses);
      surface.insert(ins.tokens);
    }
    CHECK(surface.size() > 1);
  }
  CHECK_THROWS_AS(parse_instruction(Instruction{vocab.encode("turn sideways")}), std::invalid_argument);
}

TEST_CASE("dataset splits") {
  DatasetConfig cfg;
  cfg.num_envs = 8;
  cfg.routes_per_env = 10;
  cfg.nodes_per_env = 20;
  auto d = build_dataset(cfg, 11);
  CHECK(d.environments.size() == 8);
  auto unseen_envs = d.environment_ids(Split::kValUnseen);
  auto train_envs = d.environment_ids(Split::kTrain);
  CHECK_FALSE(unseen_envs.empty());
  for (int e : unseen_envs) CHECK(std::find(train_envs.begin(), train_envs.end(), e) == train_envs.end());
  for (int e : d.environment_ids(Split::kValSeen)) {
    CHECK(std::find(train_envs.begin(), train_envs.end(), e) != train_envs.end());
  }
  std::set<std::pair<int, std::vector<NodeId>>> train_routes;
  for (auto& ex : d.split(Split::kTrain)) train_routes.insert({ex.environment_id, route_nodes(ex.route)});
  for (auto& ex : d.split(Split::kValSeen)) {
    CHECK_FALSE(train_routes.count({ex.environment_id, route_nodes(ex.route)}));
  }
  for (auto& ex : d.examples) {
    CHECK_FALSE(route_error(d.environment(ex.environment_id), ex.route).has_value());
    CHECK(ex.provenance == Provenance::kOracle);
  }
  CHECK(d.split(Split::kTrain).size() % cfg.train_paraphrases == 0);
  auto again = build_dataset(cfg, 11);
  CHECK(again.examples == d.examples);
  CHECK(again.environments == d.environments);
}

TEST_CASE("serialization round-trip") {
  DatasetConfig cfg;
  cfg.num_envs = 4;
  cfg.routes_per_env = 5;
  cfg.nodes_per_env = 16;
  auto d = build_dataset(cfg, 3);
  auto dir = std::filesystem::temp_directory_path() / "pragnav_test_world";
  std::filesystem::create_directories(dir);
  write_world(dir / "w.json", d.environments);
  write_examples(dir / "e.jsonl", d.examples);
  CHECK(read_world(dir / "w.json") == d.environments);
  CHECK(read_examples(dir / "e.jsonl") == d.examples);
  CHECK(environment_from_json(environment_to_json(d.environments[0])) == d.environments[0]);
  CHECK(parse_split("val_unseen") == Split::kValUnseen);
  CHECK_THROWS(parse_split("test"));
  std::filesystem::remove_all(dir);
}
