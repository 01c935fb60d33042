#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fihr/sim.hpp"

namespace fihr::cli {

// Bad key, bad value, or an invariant breach. Maps to exit status 1.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The config path does not exist or cannot be read. Maps to exit status 2.
struct ConfigFileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Scenario { scenario1, scenario2 };

std::string_view to_string(Scenario s);
Scenario parse_scenario(std::string_view name);

// scenario1: 100 nodes, 100x100 m, BS (50, 50); scenario2: 200 nodes,
// 200x200 m, BS (100, 100). Both 3 J per node.
net::FieldConfig scenario_field(Scenario s);

struct ConfigEntry {
  std::string key;  // "section.name"
  std::string value;
  std::size_t line = 0;
};

/// A parsed INI-style config file:
///
///   # comment
///   [field]
///   initial_energy = 3.0 J
///
/// Keys are checked against the known set at parse time; values are
/// checked when applied.
struct ConfigFile {
  std::string source;
  std::vector<ConfigEntry> entries;

  const ConfigEntry* find(std::string_view key) const;
};

ConfigFile parse_config_text(std::string_view text, std::string source = "<config>");
ConfigFile read_config_file(const std::filesystem::path& path);

// Explicit command-line values. They win over the file, which wins over the
// preset.
struct FlagOverrides {
  std::optional<Scenario> scenario;
  std::optional<proto::Protocol> protocol;
  std::optional<std::uint32_t> rounds;
  std::optional<std::uint32_t> runs;
  std::optional<std::uint64_t> seed;
  std::optional<double> fault_rate;
};

struct ResolvedConfig {
  Scenario scenario = Scenario::scenario1;
  sim::SimConfig sim;
};

ResolvedConfig resolve_config(const ConfigFile* file, const FlagOverrides& flags);

// File over the scenario1 preset (or the file's own simulation.scenario).
sim::SimConfig parse_config(const std::filesystem::path& path);

// Full config text that parses back to the same configuration.
std::string render_config(const sim::SimConfig& cfg, Scenario scenario);

}  // namespace fihr::cli
