#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace pragnav::world {

inline constexpr int kPad = 0;
inline constexpr int kBos = 1;
inline constexpr int kEos = 2;
inline constexpr int kUnk = 3;
inline constexpr int kMaxInstructionTokens = 60;

// Bijective token <-> id table. Ids 0-3 are reserved for PAD, BOS, EOS, UNK.
class Vocabulary {
 public:
  explicit Vocabulary(const std::vector<std::string>& words);

  // The closed vocabulary of the template language and landmark names.
  static const Vocabulary& standard();

  int size() const { return static_cast<int>(words_.size()); }
  int id(std::string_view word) const;  // kUnk when absent
  const std::string& word(int id) const { return words_.at(id); }
  bool contains(std::string_view word) const;

  std::vector<int> encode(std::string_view sentence) const;
  std::string decode(const std::vector<int>& tokens) const;

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, int> ids_;
};

const std::vector<std::string>& landmark_names();

}  // namespace pragnav::world
