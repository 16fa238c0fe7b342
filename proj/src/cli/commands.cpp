#include "pragnav/cli/commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "pragnav/nn/checkpoint.hpp"
#include "pragnav/pipeline/sequential.hpp"
#include "pragnav/search/follower_policy.hpp"
#include "pragnav/world/serialization.hpp"

namespace pragnav::cli {

namespace fs = std::filesystem;
using nlohmann::json;

std::string files::split_file(world::Split split) { return std::string(world::to_string(split)) + ".jsonl"; }

namespace {

constexpr world::Split kSplits[] = {world::Split::kTrain, world::Split::kValSeen, world::Split::kValUnseen};

fs::path require_file(const fs::path& dir, const std::string& name, const char* producer) {
  const auto p = dir / name;
  if (!fs::exists(p)) {
    throw MissingFileError("missing " + p.string() + " (produced by 'pragnav " + producer + "')");
  }
  return p;
}

fs::path prepare_dir(const RunConfig& config) {
  const auto dir = resolve_output_dir(config);
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void write_manifest(const fs::path& dir, const RunConfig& config, const std::string& command,
                    std::vector<fs::path>& outputs) {
  json names = json::array();
  for (const auto& p : outputs) names.push_back(p.filename().string());
  const json manifest = {{"tool", "pragnav"},
                         {"version", kToolVersion},
                         {"command", command},
                         {"config_hash", config_hash(config)},
                         {"seed", config.experiment.seed},
                         {"data_format_version", world::kDataFormatVersion},
                         {"checkpoint_format_version", nn::kCheckpointFormatVersion},
                         {"config", config_to_json(config)},
                         {"outputs", names}};
  const auto path = dir / ("manifest_" + command + ".json");
  write_text(path, manifest.dump(2) + "\n");
  outputs.push_back(path);
}

world::Dataset load_dataset(const fs::path& dir) {
  world::Dataset data;
  data.environments = world::read_world(require_file(dir, files::kWorld, "gen-world"));
  for (auto split : kSplits) {
    auto part = world::read_examples(require_file(dir, files::split_file(split), "gen-world"));
    data.examples.insert(data.examples.end(), part.begin(), part.end());
  }
  return data;
}

template <typename Config>
json train_header(const Config& model_config, const json& schedule) {
  return {{"model", model_config.to_json()}, {"schedule", schedule}};
}

json schedule_json(const follower::FollowerTrainConfig& t) {
  return {{"iterations", t.iterations},     {"batch_size", t.batch_size}, {"learning_rate", t.adam.learning_rate},
          {"clip_norm", t.clip_norm},       {"max_actions", t.max_actions},
          {"forcing", t.forcing == follower::Forcing::kStudent ? "student" : "teacher"}};
}

json schedule_json(const speaker::SpeakerTrainConfig& t) {
  return {{"iterations", t.iterations},
          {"batch_size", t.batch_size},
          {"learning_rate", t.adam.learning_rate},
          {"clip_norm", t.clip_norm}};
}

follower::FollowerModel load_follower(const fs::path& path) {
  auto ck = nn::load_checkpoint(path);
  if (ck.header.model_kind != follower::kFollowerKind) {
    throw std::runtime_error(path.string() + " holds a '" + ck.header.model_kind + "' model, expected follower");
  }
  follower::FollowerModel m{follower::FollowerConfig::from_json(ck.header.hyperparameters.at("model")),
                            std::move(ck.params)};
  if (!m.params.same_layout(follower::follower_layout(m.config))) {
    throw std::runtime_error(path.string() + ": parameters do not match the recorded follower shape");
  }
  return m;
}

speaker::SpeakerModel load_speaker(const fs::path& path) {
  auto ck = nn::load_checkpoint(path);
  if (ck.header.model_kind != speaker::kSpeakerKind) {
    throw std::runtime_error(path.string() + " holds a '" + ck.header.model_kind + "' model, expected speaker");
  }
  speaker::SpeakerModel m{speaker::SpeakerConfig::from_json(ck.header.hyperparameters.at("model")),
                          std::move(ck.params)};
  if (!m.params.same_layout(speaker::speaker_layout(m.config))) {
    throw std::runtime_error(path.string() + ": parameters do not match the recorded speaker shape");
  }
  return m;
}

std::string jsonl(const std::vector<json>& rows) {
  std::string out;
  for (const auto& r : rows) out += r.dump() + "\n";
  return out;
}

json log_json(const follower::TrainLogEntry& e) {
  json j = {{"iteration", e.iteration}, {"loss", e.loss}, {"grad_norm", e.grad_norm}};
  if (e.probe_success) j["probe_sr"] = *e.probe_success;
  return j;
}

json log_json(const speaker::SpeakerLogEntry& e) {
  json j = {{"iteration", e.iteration}, {"loss", e.loss}, {"grad_norm", e.grad_norm}};
  if (e.val_perplexity) j["val_perplexity"] = *e.val_perplexity;
  return j;
}

}  // namespace

std::vector<fs::path> cmd_gen_world(const RunConfig& config) {
  const auto dir = prepare_dir(config);
  const auto data = world::build_dataset(config.experiment.dataset, config.experiment.seed);
  std::vector<fs::path> out;
  world::write_world(dir / files::kWorld, data.environments);
  out.push_back(dir / files::kWorld);
  for (auto split : kSplits) {
    const auto p = dir / files::split_file(split);
    world::write_examples(p, data.split(split));
    out.push_back(p);
  }
  write_manifest(dir, config, "gen-world", out);
  return out;
}

std::vector<fs::path> cmd_train(const RunConfig& config, const std::string& kind, bool augmented) {
  const auto dir = prepare_dir(config);
  const auto data = load_dataset(dir);
  const auto& e = config.experiment;
  std::vector<fs::path> out;

  if (kind == "speaker") {
    if (augmented) throw std::invalid_argument("--augmented applies to the follower only");
    std::vector<speaker::SpeakerLogEntry> log;
    const auto model = pipeline::train_speaker_model(data, e, &log);
    nn::save_checkpoint(dir / files::kSpeaker,
                        {nn::kCheckpointFormatVersion, speaker::kSpeakerKind,
                         train_header(model.config, schedule_json(e.speaker_train))},
                        model.params);
    std::vector<json> rows;
    for (const auto& x : log) rows.push_back(log_json(x));
    write_text(dir / files::kSpeakerLog, jsonl(rows));
    out = {dir / files::kSpeaker, dir / files::kSpeakerLog};
    write_manifest(dir, config, "train-speaker", out);
    return out;
  }
  if (kind != "follower") throw std::invalid_argument("train: kind must be 'speaker' or 'follower'");

  std::vector<follower::TrainLogEntry> log;
  const auto header = train_header(e.follower, schedule_json(e.follower_train));
  const nn::CheckpointHeader ck_header{nn::kCheckpointFormatVersion, follower::kFollowerKind, header};
  if (augmented) {
    const auto synthetic = world::read_examples(require_file(dir, files::kSynthetic, "augment"));
    nn::ParamSet phase1;
    const auto model = pipeline::train_augmented_follower(data, synthetic, e, &log, &phase1);
    nn::save_checkpoint(dir / files::kAugmentedPhase1, ck_header, phase1);
    nn::save_checkpoint(dir / files::kAugmented, ck_header, model.params);
    out = {dir / files::kAugmentedPhase1, dir / files::kAugmented, dir / files::kAugmentedLog};
  } else {
    const auto model = pipeline::train_baseline_follower(data, e, &log);
    nn::save_checkpoint(dir / files::kFollower, ck_header, model.params);
    out = {dir / files::kFollower, dir / files::kFollowerLog};
  }
  std::vector<json> rows;
  for (const auto& x : log) rows.push_back(log_json(x));
  write_text(out.back(), jsonl(rows));
  write_manifest(dir, config, augmented ? "train-follower-augmented" : "train-follower", out);
  return out;
}

std::vector<fs::path> cmd_augment(const RunConfig& config) {
  const auto dir = prepare_dir(config);
  const auto data = load_dataset(dir);
  const auto speaker = load_speaker(require_file(dir, files::kSpeaker, "train speaker"));
  const auto synthetic = pipeline::synthesize(data, speaker, config.experiment);
  world::write_examples(dir / files::kSynthetic, synthetic);
  std::vector<fs::path> out{dir / files::kSynthetic};
  write_manifest(dir, config, "augment", out);
  return out;
}

std::vector<fs::path> cmd_eval(const RunConfig& config, const EvalOptions& options) {
  if (options.mode != "greedy" && options.mode != "pragmatic" && options.mode != "sequential") {
    throw std::invalid_argument("eval: mode must be greedy, pragmatic or sequential");
  }
  const auto split = world::parse_split(options.split);
  const auto dir = prepare_dir(config);
  const auto data = load_dataset(dir);
  const auto& e = config.experiment;
  const auto follower = load_follower(options.augmented ? require_file(dir, files::kAugmented, "train follower --augmented")
                                                        : require_file(dir, files::kFollower, "train follower"));
  const auto examples = data.split(split);
  const std::string stem =
      "eval_" + options.mode + "_" + std::string(world::to_string(split)) + (options.augmented ? "_aug" : "");
  std::vector<fs::path> out;

  pipeline::EvalReport report;
  if (options.mode == "greedy") {
    report = pipeline::evaluate(
        [&](const world::DatasetExample& ex, const world::NavGraph& g) {
          return search::follower_greedy(follower, g, ex.instruction, ex.route.start(), e.pragmatic.max_actions);
        },
        examples, data.environments, e.threshold, e.eval_workers);
  } else {
    const auto speaker = load_speaker(require_file(dir, files::kSpeaker, "train speaker"));
    const auto episodes =
        pipeline::run_pragmatic_episodes(follower, speaker, examples, data.environments, e.pragmatic, e.eval_workers);
    report = options.mode == "pragmatic"
                 ? pipeline::pragmatic_report(episodes, examples, data.environments, e.pragmatic.k,
                                              e.pragmatic.lambda, e.threshold)
                 : pipeline::sequential_report(episodes, examples, data.environments, e.pragmatic.k,
                                               e.pragmatic.lambda, e.threshold);
    std::vector<json> rows;
    for (std::size_t i = 0; i < episodes.size(); ++i) {
      for (const auto& c : episodes[i].candidates) {
        auto j = search::to_json(c);
        j["episode"] = i;
        rows.push_back(std::move(j));
      }
    }
    const auto cand = dir / ("candidates_" + std::string(world::to_string(split)) + (options.augmented ? "_aug" : "") + ".jsonl");
    write_text(cand, jsonl(rows));
    out.push_back(cand);
  }
  auto doc = pipeline::to_json(report, true);
  doc["mode"] = options.mode;
  doc["split"] = options.split;
  const auto path = dir / (stem + ".json");
  write_text(path, doc.dump(2) + "\n");
  out.insert(out.begin(), path);
  write_manifest(dir, config, stem, out);
  std::cout << options.mode << " " << options.split << ": NE " << report.navigation_error << " SR "
            << report.success_rate << " OSR " << report.oracle_success_rate << " TL " << report.trajectory_length
            << "\n";
  return out;
}

std::vector<fs::path> cmd_ablate(const RunConfig& config) {
  const auto dir = prepare_dir(config);
  const auto data = load_dataset(dir);
  pipeline::TrainedModels models{load_speaker(require_file(dir, files::kSpeaker, "train speaker")),
                                 load_follower(require_file(dir, files::kFollower, "train follower")),
                                 load_follower(require_file(dir, files::kAugmented, "train follower --augmented"))};
  const auto result = pipeline::run_ablation_grid(data, models, config.experiment);
  write_text(dir / files::kAblationJson, pipeline::to_json(result).dump(2) + "\n");
  const auto table = pipeline::format_table(result);
  write_text(dir / files::kAblationText, table);
  std::cout << table;
  std::vector<fs::path> out{dir / files::kAblationJson, dir / files::kAblationText};
  write_manifest(dir, config, "ablate", out);
  return out;
}

namespace {

void fail_line(const char* kind, const std::string& message) {
  std::cerr << json{{"error", kind}, {"message", message}}.dump() << std::endl;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"pragnav: speaker-follower navigation experiments"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_override;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", config_path, "JSON run configuration")->required();
    sub->add_option("-o,--out", out_override, "output directory (overrides output_dir)");
  };

  auto* gen = app.add_subcommand("gen-world", "generate environments and the oracle dataset");
  add_common(gen);

  std::string train_kind;
  bool augmented = false;
  auto* train = app.add_subcommand("train", "train the speaker or the follower");
  add_common(train);
  train->add_option("kind", train_kind, "speaker | follower")->required()->check(CLI::IsMember({"speaker", "follower"}));
  train->add_flag("--augmented", augmented, "two-phase follower training on synthetic plus original data");

  auto* aug = app.add_subcommand("augment", "synthesize speaker-described routes");
  add_common(aug);

  EvalOptions eval_opts;
  auto* eval = app.add_subcommand("eval", "evaluate a follower");
  add_common(eval);
  eval->add_option("mode", eval_opts.mode, "greedy | pragmatic | sequential")
      ->required()
      ->check(CLI::IsMember({"greedy", "pragmatic", "sequential"}));
  eval->add_option("--split", eval_opts.split, "train | val_seen | val_unseen")
      ->check(CLI::IsMember({"train", "val_seen", "val_unseen"}));
  eval->add_flag("--augmented", eval_opts.augmented, "evaluate the augmented follower");

  auto* ablate = app.add_subcommand("ablate", "ablation grid and parameter sweeps");
  add_common(ablate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    fail_line("usage", e.what());
    return 2;
  }

  try {
    if (!fs::exists(config_path)) throw MissingFileError("missing config " + config_path);
    auto config = load_config(config_path);
    if (!out_override.empty()) config.output_dir = out_override;
    std::vector<fs::path> written;
    if (gen->parsed()) written = cmd_gen_world(config);
    if (train->parsed()) written = cmd_train(config, train_kind, augmented);
    if (aug->parsed()) written = cmd_augment(config);
    if (eval->parsed()) written = cmd_eval(config, eval_opts);
    if (ablate->parsed()) written = cmd_ablate(config);
    for (const auto& p : written) std::cout << "wrote " << p.string() << "\n";
    return 0;
  } catch (const ConfigError& e) {
    fail_line("config", e.what());
    return 2;
  } catch (const MissingFileError& e) {
    fail_line("missing_file", e.what());
    return 3;
  } catch (const std::invalid_argument& e) {
    fail_line("invalid_argument", e.what());
    return 4;
  } catch (const std::exception& e) {
    fail_line("runtime", e.what());
    return 5;
  }
}

}  // namespace pragnav::cli
