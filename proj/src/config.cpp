#include "fihr/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include "fihr/metrics.hpp"

namespace fihr::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

enum class Kind { real, count, text, breakpoints };

struct KeySpec {
  Kind kind;
  std::string_view unit;  // accepted suffix, empty if unitless
};

// Term keys map config spellings onto term labels.
const std::map<std::string, std::pair<std::string, std::string>>& term_keys() {
  static const std::map<std::string, std::pair<std::string, std::string>> keys = [] {
    std::map<std::string, std::pair<std::string, std::string>> m;
    m["fuzzy.energy.low"] = {"energy", "Low"};
    m["fuzzy.energy.med"] = {"energy", "Med"};
    m["fuzzy.energy.high"] = {"energy", "High"};
    m["fuzzy.distance.close"] = {"distance", "Close"};
    m["fuzzy.distance.med"] = {"distance", "Med"};
    m["fuzzy.distance.far"] = {"distance", "Far"};
    const char* comr[] = {"very_small", "small",        "rather_small", "med_small", "med",
                          "med_large",  "rather_large", "large",        "very_large"};
    for (std::size_t i = 0; i < 9; ++i)
      m[std::string("fuzzy.comr.") + comr[i]] = {"comr", std::string(fuzzy::kComrLabels[i])};
    return m;
  }();
  return keys;
}

const std::map<std::string, KeySpec>& key_specs() {
  static const std::map<std::string, KeySpec> specs = [] {
    std::map<std::string, KeySpec> m{
        {"field.width", {Kind::real, "m"}},
        {"field.height", {Kind::real, "m"}},
        {"field.bs_x", {Kind::real, "m"}},
        {"field.bs_y", {Kind::real, "m"}},
        {"field.node_count", {Kind::count, ""}},
        {"field.initial_energy", {Kind::real, "J"}},
        {"radio.e_elec", {Kind::real, "J/bit"}},
        {"radio.eps_fs", {Kind::real, "J/bit/m^2"}},
        {"radio.eps_mp", {Kind::real, "J/bit/m^4"}},
        {"radio.e_da", {Kind::real, "J/bit/signal"}},
        {"protocol.t_probability", {Kind::real, ""}},
        {"protocol.comr_threshold", {Kind::real, "m"}},
        {"protocol.failover_threshold", {Kind::count, ""}},
        {"protocol.m_transmissions", {Kind::count, ""}},
        {"protocol.data_bits", {Kind::count, "bit"}},
        {"protocol.ctrl_bits", {Kind::count, "bit"}},
        {"protocol.adv_radius", {Kind::real, "m"}},
        {"fuzzy.energy_max", {Kind::real, "J"}},
        {"fuzzy.distance_max", {Kind::real, "m"}},
        {"fuzzy.comr_max", {Kind::real, "m"}},
        {"simulation.scenario", {Kind::text, ""}},
        {"simulation.protocol", {Kind::text, ""}},
        {"simulation.rounds", {Kind::count, ""}},
        {"simulation.runs", {Kind::count, ""}},
        {"simulation.seed", {Kind::count, ""}},
        {"simulation.fault_rate", {Kind::real, ""}},
    };
    for (const auto& [key, _] : term_keys()) m[key] = {Kind::breakpoints, ""};
    return m;
  }();
  return specs;
}

[[noreturn]] void fail(const ConfigFile& file, const ConfigEntry& e, const std::string& msg) {
  throw ConfigError(file.source + ":" + std::to_string(e.line) + ": " + e.key + ": " + msg);
}

// Splits "3.0 J" into number and unit; unit must match the key's unit.
double parse_real(const ConfigFile& file, const ConfigEntry& e, std::string_view unit) {
  std::string_view v = trim(e.value);
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr == v.data()) fail(file, e, "expected a number, got '" + e.value + "'");
  const auto suffix = trim(std::string_view(ptr, v.data() + v.size() - ptr));
  if (!suffix.empty() && suffix != unit) {
    if (unit.empty()) fail(file, e, "takes no unit, got '" + std::string(suffix) + "'");
    fail(file, e, "unit must be " + std::string(unit) + ", got '" + std::string(suffix) + "'");
  }
  if (!std::isfinite(out)) fail(file, e, "value must be finite");
  return out;
}

std::uint64_t parse_count(const ConfigFile& file, const ConfigEntry& e, std::string_view unit) {
  std::string_view v = trim(e.value);
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr == v.data())
    fail(file, e, "expected a non-negative integer, got '" + e.value + "'");
  const auto suffix = trim(std::string_view(ptr, v.data() + v.size() - ptr));
  if (!suffix.empty() && suffix != unit) fail(file, e, "unexpected suffix '" + std::string(suffix) + "'");
  return out;
}

std::uint32_t narrow(const ConfigFile& file, const ConfigEntry& e, std::uint64_t v) {
  if (v > std::numeric_limits<std::uint32_t>::max()) fail(file, e, "value too large");
  return static_cast<std::uint32_t>(v);
}

std::vector<double> parse_list(const ConfigFile& file, const ConfigEntry& e) {
  std::vector<double> out;
  std::string_view rest = e.value;
  for (;;) {
    const auto comma = rest.find(',');
    ConfigEntry item{e.key, std::string(trim(rest.substr(0, comma))), e.line};
    out.push_back(parse_real(file, item, ""));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

fuzzy::MembershipFunction rebuild_term(const ConfigFile& file, const ConfigEntry& e,
                                       const fuzzy::MembershipFunction& current) {
  const auto values = parse_list(file, e);
  try {
    if (std::holds_alternative<fuzzy::Triangular>(current.shape())) {
      if (values.size() != 3) fail(file, e, "triangular term takes 3 breakpoints");
      return fuzzy::MembershipFunction::triangular(values[0], values[1], values[2]);
    }
    if (values.size() != 2) fail(file, e, "shoulder term takes 2 breakpoints");
    if (std::holds_alternative<fuzzy::LeftShoulder>(current.shape()))
      return fuzzy::MembershipFunction::left_shoulder(values[0], values[1]);
    return fuzzy::MembershipFunction::right_shoulder(values[0], values[1]);
  } catch (const std::invalid_argument& ex) {
    fail(file, e, ex.what());
  }
}

// Entry that set `field` (e.g. "field.initial_energy"), if any.
const ConfigEntry* origin(const ConfigFile* file, std::string_view message) {
  if (!file) return nullptr;
  const ConfigEntry* best = nullptr;
  for (const auto& e : file->entries)
    if (message.find(e.key) != std::string_view::npos &&
        (!best || e.key.size() > best->key.size()))
      best = &e;
  return best;
}

}  // namespace

std::string_view to_string(Scenario s) {
  return s == Scenario::scenario1 ? "scenario1" : "scenario2";
}

Scenario parse_scenario(std::string_view name) {
  const auto n = lower(name);
  if (n == "scenario1") return Scenario::scenario1;
  if (n == "scenario2") return Scenario::scenario2;
  throw ConfigError("unknown scenario '" + std::string(name) + "' (scenario1 or scenario2)");
}

net::FieldConfig scenario_field(Scenario s) {
  net::FieldConfig f;
  if (s == Scenario::scenario2) {
    f.width = f.height = 200.0;
    f.bs_position = {100.0, 100.0};
    f.node_count = 200;
  } else {
    f.width = f.height = 100.0;
    f.bs_position = {50.0, 50.0};
    f.node_count = 100;
  }
  f.initial_energy = 3.0;
  return f;
}

const ConfigEntry* ConfigFile::find(std::string_view key) const {
  for (const auto& e : entries)
    if (e.key == key) return &e;
  return nullptr;
}

ConfigFile parse_config_text(std::string_view text, std::string source) {
  ConfigFile file;
  file.source = std::move(source);
  std::string section;
  std::size_t lineno = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = raw;
    if (const auto hash = line.find_first_of("#;"); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto where = [&] { return file.source + ":" + std::to_string(lineno) + ": "; };

    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where() + "unterminated section header");
      section = lower(trim(line.substr(1, line.size() - 2)));
      if (section != "field" && section != "radio" && section != "protocol" &&
          section != "fuzzy" && section != "simulation")
        throw ConfigError(where() + "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where() + "expected 'key = value'");
    if (section.empty()) throw ConfigError(where() + "key outside of any section");
    const std::string key = section + "." + lower(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (!key_specs().count(key)) throw ConfigError(where() + "unknown key '" + key + "'");
    if (file.find(key)) throw ConfigError(where() + "duplicate key '" + key + "'");
    if (value.empty()) throw ConfigError(where() + key + ": missing value");
    file.entries.push_back({key, value, lineno});
  }
  return file;
}

ConfigFile read_config_file(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec))
    throw ConfigFileError("config file '" + path.string() + "' not found");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigFileError("cannot read config file '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str(), path.string());
}

ResolvedConfig resolve_config(const ConfigFile* file, const FlagOverrides& flags) {
  static const ConfigFile empty{"<defaults>", {}};
  const ConfigFile& f = file ? *file : empty;
  auto entry = [&](std::string_view key) { return f.find(key); };
  auto real = [&](std::string_view key, auto apply) {
    if (const auto* e = entry(key)) apply(parse_real(f, *e, key_specs().at(std::string(key)).unit));
  };
  auto count = [&](std::string_view key, auto apply) {
    if (const auto* e = entry(key)) apply(*e, parse_count(f, *e, key_specs().at(std::string(key)).unit));
  };

  ResolvedConfig out{Scenario::scenario1, sim::SimConfig{}};
  if (const auto* e = entry("simulation.scenario")) {
    try {
      out.scenario = parse_scenario(e->value);
    } catch (const ConfigError& ex) {
      fail(f, *e, ex.what());
    }
  }
  if (flags.scenario) out.scenario = *flags.scenario;

  // Field first: everything else derives its defaults from it.
  auto field = scenario_field(out.scenario);
  real("field.width", [&](double v) { field.width = v; });
  real("field.height", [&](double v) { field.height = v; });
  real("field.bs_x", [&](double v) { field.bs_position.x = v; });
  real("field.bs_y", [&](double v) { field.bs_position.y = v; });
  count("field.node_count", [&](const ConfigEntry& e, std::uint64_t v) { field.node_count = narrow(f, e, v); });
  real("field.initial_energy", [&](double v) { field.initial_energy = v; });
  try {
    field.validate();
  } catch (const std::invalid_argument& ex) {
    if (const auto* e = origin(file, ex.what())) fail(f, *e, ex.what());
    throw ConfigError(ex.what());
  }

  // Universes, then the defaults that hang off them.
  double energy_max = field.initial_energy;
  double distance_max = field.max_bs_distance();
  double comr_max = sim::default_comr_max(field);
  real("fuzzy.energy_max", [&](double v) { energy_max = v; });
  real("fuzzy.distance_max", [&](double v) { distance_max = v; });
  real("fuzzy.comr_max", [&](double v) { comr_max = v; });
  for (const char* key : {"fuzzy.energy_max", "fuzzy.distance_max", "fuzzy.comr_max"})
    if (const auto* e = entry(key); e && !(parse_real(f, *e, key_specs().at(key).unit) > 0.0))
      fail(f, *e, "must be positive");

  sim::SimConfig cfg(field);
  cfg.fuzzy = fuzzy::FuzzyConfig::defaults(energy_max, distance_max, comr_max);
  cfg.proto = proto::ProtocolConfig::defaults(field, comr_max);

  for (const auto& e : f.entries) {
    const auto it = term_keys().find(e.key);
    if (it == term_keys().end()) continue;
    const auto& [var, label] = it->second;
    try {
      auto& v = var == "energy" ? cfg.fuzzy.energy : var == "distance" ? cfg.fuzzy.distance : cfg.fuzzy.comr;
      v = v.with_term(label, rebuild_term(f, e, v.terms()[v.index_of(label)].mf));
    } catch (const std::invalid_argument& ex) {
      fail(f, e, ex.what());
    }
  }
  cfg.fuzzy.rules = fuzzy::RuleBase(fuzzy::RuleBase::standard_rules(), cfg.fuzzy.energy,
                                    cfg.fuzzy.distance, cfg.fuzzy.comr);

  real("radio.e_elec", [&](double v) { cfg.radio.e_elec = v; });
  real("radio.eps_fs", [&](double v) { cfg.radio.eps_fs = v; });
  real("radio.eps_mp", [&](double v) { cfg.radio.eps_mp = v; });
  real("radio.e_da", [&](double v) { cfg.radio.e_da = v; });

  real("protocol.t_probability", [&](double v) { cfg.proto.t_probability = v; });
  real("protocol.comr_threshold", [&](double v) { cfg.proto.comr_threshold = v; });
  count("protocol.failover_threshold", [&](const ConfigEntry& e, std::uint64_t v) { cfg.proto.failover_threshold = narrow(f, e, v); });
  count("protocol.m_transmissions", [&](const ConfigEntry& e, std::uint64_t v) { cfg.proto.m_transmissions = narrow(f, e, v); });
  count("protocol.data_bits", [&](const ConfigEntry&, std::uint64_t v) { cfg.proto.data_bits = v; });
  count("protocol.ctrl_bits", [&](const ConfigEntry&, std::uint64_t v) { cfg.proto.ctrl_bits = v; });
  real("protocol.adv_radius", [&](double v) { cfg.proto.adv_radius = v; });

  if (const auto* e = entry("simulation.protocol")) {
    try {
      cfg.protocol = proto::parse_protocol(e->value);
    } catch (const std::invalid_argument& ex) {
      fail(f, *e, ex.what());
    }
  }
  count("simulation.rounds", [&](const ConfigEntry& e, std::uint64_t v) { cfg.rounds = narrow(f, e, v); });
  count("simulation.runs", [&](const ConfigEntry& e, std::uint64_t v) { cfg.runs = narrow(f, e, v); });
  count("simulation.seed", [&](const ConfigEntry&, std::uint64_t v) { cfg.seed = v; });
  real("simulation.fault_rate", [&](double v) { cfg.fault_rate = v; });

  if (flags.protocol) cfg.protocol = *flags.protocol;
  if (flags.rounds) cfg.rounds = *flags.rounds;
  if (flags.runs) cfg.runs = *flags.runs;
  if (flags.seed) cfg.seed = *flags.seed;
  if (flags.fault_rate) cfg.fault_rate = *flags.fault_rate;

  try {
    cfg.validate();
  } catch (const std::invalid_argument& ex) {
    // Blame the file only when the file supplied the offending value.
    const bool from_flag = (flags.rounds && std::string_view(ex.what()).find("simulation.rounds") != std::string_view::npos) ||
                           (flags.runs && std::string_view(ex.what()).find("simulation.runs") != std::string_view::npos) ||
                           (flags.fault_rate && std::string_view(ex.what()).find("simulation.fault_rate") != std::string_view::npos);
    if (!from_flag)
      if (const auto* e = origin(file, ex.what())) fail(f, *e, ex.what());
    throw ConfigError(ex.what());
  }
  out.sim = std::move(cfg);
  return out;
}

sim::SimConfig parse_config(const std::filesystem::path& path) {
  const auto file = read_config_file(path);
  return resolve_config(&file, {}).sim;
}

std::string render_config(const sim::SimConfig& cfg, Scenario scenario) {
  using metrics::format_number;
  std::ostringstream o;
  auto term = [&](const std::string& key, const fuzzy::MembershipFunction& mf) {
    o << key << " = ";
    const auto bps = mf.breakpoints();
    for (std::size_t i = 0; i < bps.size(); ++i) o << (i ? ", " : "") << format_number(bps[i]);
    o << '\n';
  };
  o << "[field]\n"
    << "width = " << format_number(cfg.field.width) << " m\n"
    << "height = " << format_number(cfg.field.height) << " m\n"
    << "bs_x = " << format_number(cfg.field.bs_position.x) << " m\n"
    << "bs_y = " << format_number(cfg.field.bs_position.y) << " m\n"
    << "node_count = " << cfg.field.node_count << '\n'
    << "initial_energy = " << format_number(cfg.field.initial_energy) << " J\n\n"
    << "[radio]\n"
    << "e_elec = " << format_number(cfg.radio.e_elec) << " J/bit\n"
    << "eps_fs = " << format_number(cfg.radio.eps_fs) << " J/bit/m^2\n"
    << "eps_mp = " << format_number(cfg.radio.eps_mp) << " J/bit/m^4\n"
    << "e_da = " << format_number(cfg.radio.e_da) << " J/bit/signal\n\n"
    << "[protocol]\n"
    << "t_probability = " << format_number(cfg.proto.t_probability) << '\n'
    << "comr_threshold = " << format_number(cfg.proto.comr_threshold) << " m\n"
    << "failover_threshold = " << cfg.proto.failover_threshold << '\n'
    << "m_transmissions = " << cfg.proto.m_transmissions << '\n'
    << "data_bits = " << cfg.proto.data_bits << " bit\n"
    << "ctrl_bits = " << cfg.proto.ctrl_bits << " bit\n"
    << "adv_radius = " << format_number(cfg.proto.adv_radius) << " m\n\n"
    << "[fuzzy]\n"
    << "energy_max = " << format_number(cfg.fuzzy.energy.hi()) << " J\n"
    << "distance_max = " << format_number(cfg.fuzzy.distance.hi()) << " m\n"
    << "comr_max = " << format_number(cfg.fuzzy.comr.hi()) << " m\n";
  for (const auto& [key, target] : term_keys()) {
    const auto& [var, label] = target;
    const auto& v = var == "energy" ? cfg.fuzzy.energy : var == "distance" ? cfg.fuzzy.distance : cfg.fuzzy.comr;
    term(key.substr(std::string("fuzzy.").size()), v.terms()[v.index_of(label)].mf);
  }
  o << "\n[simulation]\n"
    << "scenario = " << to_string(scenario) << '\n'
    << "protocol = " << proto::to_string(cfg.protocol) << '\n'
    << "rounds = " << cfg.rounds << '\n'
    << "runs = " << cfg.runs << '\n'
    << "seed = " << cfg.seed << '\n'
    << "fault_rate = " << format_number(cfg.fault_rate) << '\n';
  return o.str();
}

}  // namespace fihr::cli
