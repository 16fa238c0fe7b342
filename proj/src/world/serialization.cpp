#include "pragnav/world/serialization.hpp"

#include <fstream>
#include <stdexcept>
#include <string>

namespace pragnav::world {

using nlohmann::json;

namespace {

void check_version(const json& doc, const char* what) {
  if (!doc.contains("format_version") || doc.at("format_version").get<int>() != kDataFormatVersion) {
    throw std::runtime_error(std::string(what) + ": unsupported or missing format_version");
  }
}

}  // namespace

json environment_to_json(const NavGraph& graph) {
  json nodes = json::array();
  json landmarks = json::array();
  for (NodeId n = 0; n < static_cast<NodeId>(graph.size()); ++n) {
    nodes.push_back({{"id", n}, {"x", graph.position(n).x}, {"y", graph.position(n).y}});
    for (const auto& lm : graph.landmarks_at(n)) {
      landmarks.push_back({{"node", n}, {"class", lm.landmark_class}, {"heading", lm.placement_heading}});
    }
  }
  json edges = json::array();
  for (auto [a, b] : graph.edges()) edges.push_back({a, b});
  return {{"format_version", kDataFormatVersion},
          {"environment_id", graph.environment_id()},
          {"nodes", nodes},
          {"edges", edges},
          {"landmarks", landmarks}};
}

NavGraph environment_from_json(const json& doc) {
  check_version(doc, "environment");
  const auto& nodes = doc.at("nodes");
  std::vector<Vec2> positions(nodes.size());
  for (const auto& n : nodes) {
    positions.at(n.at("id").get<std::size_t>()) = {n.at("x").get<double>(), n.at("y").get<double>()};
  }
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (const auto& e : doc.at("edges")) edges.emplace_back(e.at(0).get<NodeId>(), e.at(1).get<NodeId>());
  std::vector<std::vector<Landmark>> landmarks(positions.size());
  for (const auto& lm : doc.at("landmarks")) {
    landmarks.at(lm.at("node").get<std::size_t>())
        .push_back({lm.at("class").get<int>(), lm.at("heading").get<double>()});
  }
  return NavGraph(doc.at("environment_id").get<int>(), std::move(positions), edges, std::move(landmarks));
}

json route_to_json(const Route& route) {
  json states = json::array();
  for (const auto& s : route.states) states.push_back({s.node, s.heading, s.completed ? 1 : 0});
  json actions = json::array();
  for (const auto& a : route.actions) actions.push_back(a.is_stop() ? -1 : a.target);
  return {{"states", states}, {"actions", actions}};
}

Route route_from_json(const json& doc) {
  Route route;
  for (const auto& s : doc.at("states")) {
    route.states.push_back({s.at(0).get<NodeId>(), s.at(1).get<int>(), s.at(2).get<int>() != 0});
  }
  for (const auto& a : doc.at("actions")) {
    const int target = a.get<int>();
    route.actions.push_back(target < 0 ? Action::stop() : Action::move(target));
  }
  return route;
}

json example_to_json(const DatasetExample& example) {
  return {{"format_version", kDataFormatVersion},
          {"environment_id", example.environment_id},
          {"split", to_string(example.split)},
          {"provenance", to_string(example.provenance)},
          {"route", route_to_json(example.route)},
          {"instruction", example.instruction.tokens}};
}

DatasetExample example_from_json(const json& doc) {
  check_version(doc, "dataset example");
  DatasetExample e;
  e.environment_id = doc.at("environment_id").get<int>();
  e.split = parse_split(doc.at("split").get<std::string>());
  e.provenance = parse_provenance(doc.at("provenance").get<std::string>());
  e.route = route_from_json(doc.at("route"));
  e.instruction.tokens = doc.at("instruction").get<std::vector<int>>();
  return e;
}

void write_world(const std::filesystem::path& path, const std::vector<NavGraph>& environments) {
  json envs = json::array();
  for (const auto& g : environments) envs.push_back(environment_to_json(g));
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << json{{"format_version", kDataFormatVersion}, {"environments", envs}}.dump() << '\n';
}

std::vector<NavGraph> read_world(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  const json doc = json::parse(in);
  check_version(doc, "world file");
  std::vector<NavGraph> envs;
  for (const auto& e : doc.at("environments")) envs.push_back(environment_from_json(e));
  for (std::size_t i = 0; i < envs.size(); ++i) {
    if (envs[i].environment_id() != static_cast<int>(i)) {
      throw std::runtime_error("world file environments must be ordered by id");
    }
  }
  return envs;
}

void write_examples(const std::filesystem::path& path, const std::vector<DatasetExample>& examples) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (const auto& e : examples) out << example_to_json(e).dump() << '\n';
}

std::vector<DatasetExample> read_examples(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::vector<DatasetExample> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(example_from_json(json::parse(line)));
  }
  return out;
}

}  // namespace pragnav::world
