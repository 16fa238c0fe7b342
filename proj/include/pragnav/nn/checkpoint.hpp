#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "pragnav/nn/tensor.hpp"

namespace pragnav::nn {

inline constexpr std::uint32_t kCheckpointFormatVersion = 1;

struct CheckpointHeader {
  std::uint32_t format_version = kCheckpointFormatVersion;
  std::string model_kind;
  nlohmann::json hyperparameters = nlohmann::json::object();
};

struct Checkpoint {
  CheckpointHeader header;
  ParamSet params;
};

// Binary layout, little-endian:
//   "PNCK" u32 format_version
//   u32 len, model_kind bytes
//   u32 len, hyperparameters as compact JSON
//   u32 record count, then per record in name order:
//     u32 len, name bytes, u32 rank, u32 dims[rank], f32 values[]
// Values are stored at 32-bit precision, so decode(encode(x)) re-encodes to
// identical bytes.
std::string encode_checkpoint(const CheckpointHeader& header, const ParamSet& params);
Checkpoint decode_checkpoint(const std::string& bytes);

void save_checkpoint(const std::filesystem::path& path, const CheckpointHeader& header, const ParamSet& params);
Checkpoint load_checkpoint(const std::filesystem::path& path);

// Rounds every value to the nearest 32-bit float, i.e. what a save/load
// cycle produces.
void round_to_storage_precision(ParamSet& params);

}  // namespace pragnav::nn
