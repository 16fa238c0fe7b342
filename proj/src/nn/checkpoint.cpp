#include "pragnav/nn/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pragnav::nn {
namespace {

constexpr char kMagic[4] = {'P', 'N', 'C', 'K'};

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_bytes(std::string& out, const std::string& s) {
  put_u32(out, static_cast<std::uint32_t>(s.size()));
  out += s;
}

class Reader {
 public:
  explicit Reader(const std::string& bytes) : bytes_(bytes) {}

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    pos_ += 4;
    return v;
  }

  std::string bytes() {
    const auto n = u32();
    need(n);
    std::string s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  std::string raw(std::size_t n) {
    need(n);
    std::string s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  bool done() const { return pos_ == bytes_.size(); }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > bytes_.size()) throw std::runtime_error("checkpoint truncated");
  }

  const std::string& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string encode_checkpoint(const CheckpointHeader& header, const ParamSet& params) {
  std::string out(kMagic, 4);
  put_u32(out, header.format_version);
  put_bytes(out, header.model_kind);
  put_bytes(out, header.hyperparameters.dump());
  put_u32(out, static_cast<std::uint32_t>(params.size()));
  for (const auto& [name, tensor] : params) {
    put_bytes(out, name);
    put_u32(out, static_cast<std::uint32_t>(tensor.rank()));
    for (auto d : tensor.shape()) put_u32(out, static_cast<std::uint32_t>(d));
    for (Real v : tensor.values()) put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  }
  return out;
}

Checkpoint decode_checkpoint(const std::string& bytes) {
  Reader in(bytes);
  if (in.raw(4) != std::string(kMagic, 4)) throw std::runtime_error("not a checkpoint file");
  Checkpoint ck;
  ck.header.format_version = in.u32();
  if (ck.header.format_version != kCheckpointFormatVersion) {
    throw std::runtime_error("unsupported checkpoint format_version " + std::to_string(ck.header.format_version));
  }
  ck.header.model_kind = in.bytes();
  ck.header.hyperparameters = nlohmann::json::parse(in.bytes());
  const auto records = in.u32();
  for (std::uint32_t r = 0; r < records; ++r) {
    const auto name = in.bytes();
    Shape shape(in.u32());
    for (auto& d : shape) d = in.u32();
    Tensor t(shape);
    for (auto& v : t.values()) v = std::bit_cast<float>(in.u32());
    ck.params.add(name, std::move(t));
  }
  if (!in.done()) throw std::runtime_error("trailing bytes after checkpoint records");
  return ck;
}

void save_checkpoint(const std::filesystem::path& path, const CheckpointHeader& header, const ParamSet& params) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  const auto bytes = encode_checkpoint(header, params);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return decode_checkpoint(buffer.str());
}

void round_to_storage_precision(ParamSet& params) {
  for (auto& [_, t] : params) {
    for (auto& v : t.values()) v = static_cast<float>(v);
  }
}

}  // namespace pragnav::nn
