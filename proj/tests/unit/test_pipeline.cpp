#include <doctest.h>

#include <stdexcept>

#include "../support/toy.hpp"
#include "pragnav/pipeline/augment.hpp"
#include "pragnav/pipeline/evaluate.hpp"
#include "pragnav/pipeline/sequential.hpp"
#include "pragnav/world/environment.hpp"

using namespace pragnav;
using namespace pragnav::pipeline;

namespace {

// 0 - 1 - 2 - 3 - 4 on a line, spacing 2
world::NavGraph line() {
  std::vector<world::Vec2> pos{{0, 0}, {2, 0}, {4, 0}, {6, 0}, {8, 0}};
  return world::NavGraph(0, pos, {{0, 1}, {1, 2}, {2, 3}, {3, 4}}, std::vector<std::vector<world::Landmark>>(5));
}

world::DatasetExample line_example(world::NodeId start, world::NodeId goal) {
  auto g = line();
  world::DatasetExample ex;
  ex.route = world::route_between(g, start, goal);
  return ex;
}

follower::FollowerConfig tiny_follower() {
  follower::FollowerConfig c;
  c.vocab_size = static_cast<std::size_t>(world::Vocabulary::standard().size());
  c.embedding = c.hidden = 8;
  c.attention = 4;
  return c;
}

}  // namespace

TEST_CASE("episode metrics") {
  auto g = line();
  auto ex = line_example(0, 2);

  auto exact = score_episode(g, ex, ex.route);
  CHECK(exact.navigation_error == 0);
  CHECK(exact.success);
  CHECK(exact.oracle_success);
  CHECK(exact.trajectory_length == doctest::Approx(4));

  // walks past the goal and stops 4 units beyond it
  auto over = score_episode(g, ex, world::route_from_nodes(g, {0, 1, 2, 3, 4}));
  CHECK(over.navigation_error == doctest::Approx(4));
  CHECK_FALSE(over.success);
  CHECK(over.oracle_success);
  CHECK(over.oracle_error == 0);
  CHECK(over.trajectory_length == doctest::Approx(8));

  // one node short is within 3 units
  auto near = score_episode(g, ex, world::route_from_nodes(g, {0, 1}));
  CHECK(near.success);
  CHECK(near.navigation_error == doctest::Approx(2));

  auto broken = world::route_from_nodes(g, {0, 1, 2});
  broken.states[1].node = 3;
  auto bad = score_episode(g, ex, broken);
  CHECK_FALSE(bad.error.empty());
  CHECK_FALSE(bad.success);
  CHECK(bad.navigation_error == doctest::Approx(4));
  CHECK(bad.trajectory_length == 0);

  auto rep = summarize({exact, over, near, bad});
  CHECK(rep.success_rate == doctest::Approx(0.5));
  CHECK(rep.oracle_success_rate == doctest::Approx(0.75));
  CHECK(rep.navigation_error == doctest::Approx(2.5));
  CHECK(rep.oracle_success_rate >= rep.success_rate);
}

TEST_CASE("evaluate: agent errors count as failures and threads do not change the report") {
  std::vector<world::NavGraph> envs{line()};
  std::vector<world::DatasetExample> exs;
  for (int s = 0; s < 5; ++s) exs.push_back(line_example(s, (s + 3) % 5));
  Agent agent = [](const world::DatasetExample& ex, const world::NavGraph& g) {
    if (ex.route.start().node == 4) throw std::invalid_argument("no route");
    return world::route_from_nodes(g, world::shortest_path(g, ex.route.start().node, 2));
  };
  auto one = evaluate(agent, exs, envs, 3.0, 1);
  auto many = evaluate(agent, exs, envs, 3.0, 3);
  CHECK(one.episodes.size() == 5);
  CHECK(to_json(one, true) == to_json(many, true));
  CHECK_FALSE(one.episodes[4].error.empty());
  auto j = to_json(one);
  for (auto key : {"NE", "SR", "OSR", "TL"}) CHECK(j.contains(key));
}

TEST_CASE("random walk success matches the exact chance rate") {
  // uniform random walk on the line from node 2, capped at 2 moves then Stop;
  // each branch enumerated exactly and weighted by its probability
  auto g = line();
  auto ex = line_example(2, 4);
  double chance = 0;
  auto walk = [&](auto&& self, std::vector<world::NodeId> nodes, double p) -> void {
    const auto n = nodes.back();
    const auto nb = g.neighbors(n);
    const double choices = 1.0 + (nodes.size() < 3 ? static_cast<double>(nb.size()) : 0.0);
    if (score_episode(g, ex, world::route_from_nodes(g, nodes)).success) chance += p / choices;
    if (nodes.size() < 3) {
      for (auto v : nb) {
        auto next = nodes;
        next.push_back(v);
        self(self, next, p / choices);
      }
    }
  };
  walk(walk, {2}, 1.0);
  std::vector<world::DatasetExample> exs(6000, ex);
  std::vector<world::NavGraph> envs{g};
  std::size_t i = 0;
  Agent agent = [&](const world::DatasetExample& e, const world::NavGraph& gg) {
    Rng rng(derive_seed(99, i++));
    world::Route r;
    r.states.push_back(e.route.start());
    while (!r.last().completed) {
      auto acts = toy::legal_actions(gg, r.last().node);
      auto a = r.actions.size() < 2 ? acts[rng.below(acts.size())] : world::Action::stop();
      r.actions.push_back(a);
      r.states.push_back(world::transition(gg, r.last(), a));
    }
    return r;
  };
  auto rep = evaluate(agent, exs, envs);
  CHECK(rep.success_rate == doctest::Approx(chance).epsilon(0.08));
}

TEST_CASE("sequential walk: K=1 on a deterministic follower is the route itself") {
  auto g = line();
  struct Right {
    using Memory = int;
    const world::NavGraph* g;
    Memory start() const { return 0; }
    std::vector<search::Successor<int>> expand(const int&, const world::AgentState& s) const {
      std::vector<search::Successor<int>> out{{world::Action::stop(), s.node == 3 ? 0.0 : -50.0, 0}};
      for (auto v : g->neighbors(s.node)) out.push_back({world::Action::move(v), v > s.node ? -0.1 : -50.0, 0});
      return out;
    }
  };
  Right p{&g};
  auto r = search::state_factored_search(p, g, {0, 0, false}, {1, 20, true});
  REQUIRE(r.completed.size() == 1);
  auto walk = sequential_challenge_trajectory(r.expansion_trace, r.completed[0].route, g);
  CHECK(walk == r.completed[0].route);
}

TEST_CASE("sequential walk is connected and ends where the selection ends") {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    auto g = world::generate_environment(seed, 15, 0.5);
    toy::HistoryPolicy p{&g, seed};
    auto r = search::state_factored_search(p, g, {0, 0, false}, {10, 20, true});
    for (const auto& c : r.completed) {
      auto walk = sequential_challenge_trajectory(r.expansion_trace, c.route, g);
      CHECK_FALSE(world::route_error(g, walk).has_value());
      CHECK(walk.last().node == c.route.last().node);
      CHECK(walk.start() == c.route.start());
      // visits every node any selected route visited
      std::set<world::NodeId> seen;
      for (auto n : world::route_nodes(walk)) seen.insert(n);
      for (const auto& t : r.expansion_trace) {
        for (const auto& s : t.states) CHECK(seen.count(s.node));
      }
    }
  }
}

TEST_CASE("augmentation sizes and schedules") {
  CHECK(augmentation_size(25, 10) == 250);
  CHECK(augmentation_size(0, 10) == 0);
  CHECK_THROWS(augmentation_size(-1, 10));
  follower::FollowerTrainConfig t;
  auto s = TwoPhaseSchedule::standard(t, 5000);
  CHECK(s.augmented_iterations == 5000);
  CHECK(s.finetune_iterations == 2000);
  CHECK(TwoPhaseSchedule::standard(t, 1500).finetune_iterations == 600);
}

TEST_CASE("augmentation samples training environments only") {
  speaker::SpeakerConfig sc;
  sc.vocab_size = static_cast<std::size_t>(world::Vocabulary::standard().size());
  sc.embedding = sc.hidden = 8;
  speaker::SpeakerModel spk{sc, speaker::init_speaker(sc, 1)};
  std::vector<world::NavGraph> envs;
  for (int e = 0; e < 4; ++e) envs.push_back(world::generate_environment(static_cast<std::uint64_t>(e), 16, 0.5, e));
  CHECK(augment_dataset(spk, envs, {0, 2}, 0, 5).empty());
  auto syn = augment_dataset(spk, envs, {0, 2}, 30, 5);
  REQUIRE(syn.size() == 30);
  std::set<int> used;
  for (const auto& ex : syn) {
    CHECK((ex.environment_id == 0 || ex.environment_id == 2));
    used.insert(ex.environment_id);
    CHECK(ex.provenance == world::Provenance::kSpeakerSynthetic);
    CHECK(ex.split == world::Split::kTrain);
    CHECK_FALSE(world::route_error(envs[static_cast<std::size_t>(ex.environment_id)], ex.route).has_value());
    CHECK(ex.instruction.tokens.back() == world::kEos);
  }
  CHECK(used.size() == 2);
  CHECK(augment_dataset(spk, envs, {0, 2}, 30, 5) == syn);
}

TEST_CASE("two-phase training with no synthetic data is plain training") {
  auto cfg = tiny_follower();
  auto g = world::generate_environment(2, 16, 0.5);
  std::vector<world::DatasetExample> d;
  for (std::uint64_t s = 0; s < 4; ++s) {
    world::DatasetExample ex;
    ex.route = world::sample_route(g, s);
    ex.instruction = world::oracle_instruction(g, ex.route, s);
    d.push_back(ex);
  }
  follower::FollowerTrainConfig t;
  t.batch_size = 2;
  t.seed = 4;
  t.log_every = 3;
  auto sched = TwoPhaseSchedule::standard(t, 5);

  follower::FollowerModel a{cfg, follower::init_follower(cfg, 1)};
  auto res = two_phase_train(a, d, {}, {g}, sched);
  follower::FollowerModel b{cfg, follower::init_follower(cfg, 1)};
  t.iterations = 7;
  follower::train_follower(b, d, {g}, t);
  CHECK(a.params == b.params);

  // with synthetic data the phase-boundary snapshot differs from the end
  follower::FollowerModel c{cfg, follower::init_follower(cfg, 1)};
  auto syn = d;
  for (auto& ex : syn) ex.provenance = world::Provenance::kSpeakerSynthetic;
  auto res2 = two_phase_train(c, d, syn, {g}, sched);
  CHECK_FALSE(res2.phase1_params == c.params);
  REQUIRE_FALSE(res2.log.empty());
  CHECK(res2.log.back().iteration == 7);
}
