#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "pragnav/cli/commands.hpp"

using namespace pragnav;
using namespace pragnav::cli;
using nlohmann::json;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

json tiny(const std::filesystem::path& out) {
  return {{"seed", 3},
          {"output_dir", out.string()},
          {"world", {{"num_envs", 4}, {"routes_per_env", 6}, {"nodes_per_env", 14}}},
          {"follower", {{"embedding", 8}, {"hidden", 8}, {"attention", 4}}},
          {"speaker", {{"embedding", 8}, {"hidden", 8}}},
          {"follower_train", {{"iterations", 4}, {"batch_size", 2}, {"log_every", 2}}},
          {"speaker_train", {{"iterations", 4}, {"batch_size", 2}, {"log_every", 2}}},
          {"augment", {{"multiplier", 1}}},
          {"pragmatic", {{"K", 3}}},
          {"sweeps", {{"lambdas", {0, 1}}, {"ks", {1, 3}}}}};
}

}  // namespace

TEST_CASE("config parsing") {
  auto rc = parse_config(json{{"seed", 7}});
  CHECK(rc.experiment.seed == 7);
  CHECK(rc.experiment.pragmatic.k == 40);
  CHECK(rc.experiment.pragmatic.lambda == doctest::Approx(0.95));

  CHECK_THROWS_AS(parse_config(json::object()), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"seed", 1}, {"sead", 2}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"seed", 1}, {"pragmatic", {{"k", 5}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"seed", 1}, {"pragmatic", {{"lambda", 1.5}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"seed", 1}, {"pragmatic", {{"K", 0}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"seed", -1}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"seed", 1}, {"follower_train", {{"forcing", "mixed"}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"seed", 1}, {"world", 3}}), ConfigError);

  auto full = parse_config(tiny("x"));
  CHECK(parse_config(config_to_json(full)).experiment.pragmatic.k == 3);
  CHECK(config_hash(full) == config_hash(parse_config(config_to_json(full))));
  CHECK(config_hash(full) != config_hash(rc));
}

TEST_CASE("commands: missing inputs and a tiny end-to-end run") {
  auto dir = std::filesystem::temp_directory_path() / "pragnav_test_cli";
  std::filesystem::remove_all(dir);
  auto rc = parse_config(tiny(dir));
  CHECK_THROWS_AS(cmd_train(rc, "speaker", false), MissingFileError);

  auto written = cmd_gen_world(rc);
  CHECK(std::filesystem::exists(dir / files::kWorld));
  CHECK(std::filesystem::exists(dir / "manifest_gen-world.json"));
  CHECK_THROWS_AS(cmd_augment(rc), MissingFileError);
  CHECK_THROWS_AS(cmd_train(rc, "critic", false), std::invalid_argument);

  cmd_train(rc, "speaker", false);
  cmd_train(rc, "follower", false);
  cmd_augment(rc);
  cmd_train(rc, "follower", true);
  CHECK(std::filesystem::exists(dir / files::kAugmentedPhase1));
  auto speaker_bytes = slurp(dir / files::kSpeaker);
  cmd_train(rc, "speaker", false);
  CHECK(slurp(dir / files::kSpeaker) == speaker_bytes);

  cmd_eval(rc, {"pragmatic", "val_seen", true});
  auto report = json::parse(slurp(dir / "eval_pragmatic_val_seen_aug.json"));
  CHECK(report.contains("SR"));
  CHECK(report["episodes"].get<int>() > 0);
  cmd_ablate(rc);
  CHECK(std::filesystem::exists(dir / files::kAblationText));
  auto manifest = json::parse(slurp(dir / "manifest_ablate.json"));
  CHECK(manifest["config_hash"] == config_hash(rc));
  std::filesystem::remove_all(dir);
}

TEST_CASE("exit codes") {
  auto call = [](std::vector<std::string> args) {
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    return run(static_cast<int>(argv.size()), argv.data());
  };
  CHECK(call({"pragnav", "gen-world", "-c", "/nonexistent/config.json"}) == 3);
  CHECK(call({"pragnav", "gen-world"}) == 2);
  CHECK(call({"pragnav", "frobnicate"}) == 2);
  auto bad = std::filesystem::temp_directory_path() / "pragnav_bad_config.json";
  std::ofstream(bad) << R"({"seed": 1, "nope": 2})";
  CHECK(call({"pragnav", "gen-world", "-c", bad.string()}) == 2);
  std::filesystem::remove(bad);
}
