#pragma once

#include <filesystem>
#include <vector>

#include <json.hpp>

#include "pragnav/world/dataset.hpp"
#include "pragnav/world/nav_graph.hpp"

namespace pragnav::world {

inline constexpr int kDataFormatVersion = 1;

nlohmann::json environment_to_json(const NavGraph& graph);
NavGraph environment_from_json(const nlohmann::json& doc);

nlohmann::json route_to_json(const Route& route);
Route route_from_json(const nlohmann::json& doc);

// One JSON-lines record.
nlohmann::json example_to_json(const DatasetExample& example);
DatasetExample example_from_json(const nlohmann::json& doc);

// World file: a single JSON document holding every environment.
void write_world(const std::filesystem::path& path, const std::vector<NavGraph>& environments);
std::vector<NavGraph> read_world(const std::filesystem::path& path);

void write_examples(const std::filesystem::path& path, const std::vector<DatasetExample>& examples);
std::vector<DatasetExample> read_examples(const std::filesystem::path& path);

}  // namespace pragnav::world
