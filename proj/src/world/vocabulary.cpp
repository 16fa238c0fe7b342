#include "pragnav/world/vocabulary.hpp"

#include <sstream>
#include <stdexcept>

#include "pragnav/world/nav_graph.hpp"

namespace pragnav::world {

const std::vector<std::string>& landmark_names() {
  static const std::vector<std::string> names = {
      "lamp",  "sofa",    "table",    "chair",   "bed",     "plant",
      "door",  "window",  "stairs",   "rug",     "mirror",  "sink",
      "desk",  "shelf",   "painting", "clock",   "vase",    "piano",
      "fireplace", "television", "oven", "bathtub", "fridge", "statue"};
  static_assert(kLandmarkClasses == 24);
  return names;
}

Vocabulary::Vocabulary(const std::vector<std::string>& words) {
  const std::vector<std::string> reserved = {"<pad>", "<bos>", "<eos>", "<unk>"};
  for (const auto& w : reserved) {
    ids_.emplace(w, static_cast<int>(words_.size()));
    words_.push_back(w);
  }
  for (const auto& w : words) {
    if (!ids_.emplace(w, static_cast<int>(words_.size())).second) {
      throw std::invalid_argument("duplicate vocabulary word: " + w);
    }
    words_.push_back(w);
  }
}

const Vocabulary& Vocabulary::standard() {
  static const Vocabulary vocab = [] {
    std::vector<std::string> words = {
        ".",    "go",   "forward", "to",    "the",  "walk", "straight", "toward",
        "continue", "ahead", "turn", "left", "right", "make", "a",     "around",
        "back", "head", "stop",    "wait",  "at",   "there", "near"};
    for (const auto& name : landmark_names()) words.push_back(name);
    return Vocabulary(words);
  }();
  return vocab;
}

int Vocabulary::id(std::string_view word) const {
  const auto it = ids_.find(std::string(word));
  return it == ids_.end() ? kUnk : it->second;
}

bool Vocabulary::contains(std::string_view word) const {
  return ids_.contains(std::string(word));
}

std::vector<int> Vocabulary::encode(std::string_view sentence) const {
  std::vector<int> tokens;
  std::istringstream in{std::string(sentence)};
  std::string w;
  while (in >> w) tokens.push_back(id(w));
  return tokens;
}

std::string Vocabulary::decode(const std::vector<int>& tokens) const {
  std::string out;
  for (int t : tokens) {
    if (!out.empty()) out += ' ';
    out += word(t);
  }
  return out;
}

}  // namespace pragnav::world
