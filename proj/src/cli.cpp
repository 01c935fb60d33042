#include "fihr/cli.hpp"

#include <CLI11.hpp>

#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "fihr/config.hpp"
#include "fihr/report.hpp"

namespace fihr::cli {

namespace {

std::string cell(const std::optional<double>& v, std::size_t count, std::size_t runs) {
  if (!v) return "n/a";
  std::ostringstream s;
  s << std::fixed << std::setprecision(1) << *v;
  if (count != runs) s << " (" << count << "/" << runs << ")";
  return s.str();
}

void print_comparison(std::ostream& out, const std::vector<sim::SimulationResult>& results) {
  out << std::left << std::setw(10) << "protocol" << std::setw(16) << "FND" << std::setw(16)
      << "HNA" << "throughput_kb\n";
  for (const auto& r : results) {
    const auto& s = r.mean.summary;
    out << std::left << std::setw(10) << proto::to_string(r.protocol) << std::setw(16)
        << cell(s.fnd, s.fnd_count, s.runs) << std::setw(16) << cell(s.hna, s.hna_count, s.runs)
        << std::fixed << std::setprecision(1) << s.throughput_kb << '\n';
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Round-based WSN simulator for FIHR, IHR and DHR clustering", "fihr_sim"};

  std::string scenario_name;
  std::string protocol_name;
  std::uint32_t runs = 0, rounds = 0;
  std::uint64_t seed = 0;
  double fault_rate = 0.0;
  std::string config_path;
  std::string out_dir = "results";
  bool compare = false;

  auto* scenario_opt = app.add_option("--scenario", scenario_name, "scenario1 or scenario2");
  auto* protocol_opt = app.add_option("--protocol", protocol_name, "fihr, ihr, dhr or all");
  auto* runs_opt = app.add_option("--runs", runs, "independent runs per protocol");
  auto* rounds_opt = app.add_option("--rounds", rounds, "rounds per run");
  auto* seed_opt = app.add_option("--seed", seed, "base seed; run k uses seed + k");
  auto* fault_opt = app.add_option("--fault-rate", fault_rate, "per-head fault probability per round");
  app.add_option("--config", config_path, "INI config file");
  app.add_option("--out", out_dir, "output directory for CSV files");
  app.add_flag("--compare", compare, "print mean FND/HNA/throughput per protocol");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  try {
    FlagOverrides flags;
    if (*scenario_opt) flags.scenario = parse_scenario(scenario_name);
    if (*runs_opt) flags.runs = runs;
    if (*rounds_opt) flags.rounds = rounds;
    if (*seed_opt) flags.seed = seed;
    if (*fault_opt) flags.fault_rate = fault_rate;

    std::vector<proto::Protocol> protocols;
    if (*protocol_opt && protocol_name == "all") {
      protocols = {proto::Protocol::fihr, proto::Protocol::ihr, proto::Protocol::dhr};
    } else if (*protocol_opt) {
      try {
        flags.protocol = proto::parse_protocol(protocol_name);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string(e.what()) + " (fihr, ihr, dhr or all)");
      }
    }
    if (compare && *protocol_opt && protocol_name != "all")
      throw ConfigError("--compare needs --protocol all");

    std::optional<ConfigFile> file;
    if (!config_path.empty()) file = read_config_file(config_path);
    auto resolved = resolve_config(file ? &*file : nullptr, flags);
    if (protocols.empty()) {
      if (compare)
        protocols = {proto::Protocol::fihr, proto::Protocol::ihr, proto::Protocol::dhr};
      else
        protocols = {resolved.sim.protocol};
    }

    // Same seeds for every protocol, so runs are paired.
    std::vector<sim::SimulationResult> results;
    for (auto p : protocols) {
      auto cfg = resolved.sim;
      cfg.protocol = p;
      results.push_back(sim::run_simulation(cfg));
    }

    const auto written = report::emit_csv(results, out_dir, to_string(resolved.scenario));
    out << "wrote " << written.size() << " files to " << out_dir << '\n';
    if (compare) print_comparison(out, results);
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ConfigFileError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const metrics::IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
}

}  // namespace fihr::cli
