#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "pragnav/cli/config.hpp"

namespace pragnav::cli {

inline constexpr const char* kToolVersion = "0.1.0";

// A required input file is absent.
class MissingFileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File names inside the output directory.
namespace files {
inline constexpr const char* kWorld = "world.json";
inline constexpr const char* kSpeaker = "speaker.ckpt";
inline constexpr const char* kSpeakerLog = "speaker_log.jsonl";
inline constexpr const char* kFollower = "follower.ckpt";
inline constexpr const char* kFollowerLog = "follower_log.jsonl";
inline constexpr const char* kSynthetic = "synthetic.jsonl";
inline constexpr const char* kAugmentedPhase1 = "follower_aug_phase1.ckpt";
inline constexpr const char* kAugmented = "follower_aug.ckpt";
inline constexpr const char* kAugmentedLog = "follower_aug_log.jsonl";
inline constexpr const char* kAblationJson = "ablation.json";
inline constexpr const char* kAblationText = "ablation.txt";
std::string split_file(world::Split split);  // "<split>.jsonl"
}  // namespace files

struct EvalOptions {
  std::string mode = "greedy";  // greedy | pragmatic | sequential
  std::string split = "val_unseen";
  bool augmented = false;  // evaluate follower_aug.ckpt instead of follower.ckpt
};

// Each command writes its outputs plus manifest_<command>.json and returns
// the paths written.
std::vector<std::filesystem::path> cmd_gen_world(const RunConfig& config);
std::vector<std::filesystem::path> cmd_train(const RunConfig& config, const std::string& kind, bool augmented);
std::vector<std::filesystem::path> cmd_augment(const RunConfig& config);
std::vector<std::filesystem::path> cmd_eval(const RunConfig& config, const EvalOptions& options);
std::vector<std::filesystem::path> cmd_ablate(const RunConfig& config);

// Entry point used by the command-line tool; returns the process exit code.
// Failures print one JSON line {"error": kind, "message": ...} to stderr.
int run(int argc, char** argv);

}  // namespace pragnav::cli
