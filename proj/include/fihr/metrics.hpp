#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fihr::metrics {

// Snapshot after `round` rounds; round 0 is the freshly deployed network.
struct RoundMetrics {
  std::uint32_t round = 0;
  std::uint32_t alive = 0;
  std::uint32_t dead = 0;
  double total_residual = 0.0;
  std::uint64_t packets_cum = 0;
  std::uint64_t failovers_cum = 0;

  friend bool operator==(const RoundMetrics&, const RoundMetrics&) = default;
};

// First round with at least one dead node.
std::optional<std::uint32_t> compute_fnd(std::span<const RoundMetrics> series);
// First round with alive <= node_count / 2.
std::optional<std::uint32_t> compute_hna(std::span<const RoundMetrics> series,
                                         std::uint32_t node_count);
// Decimal kilobytes (1 KB = 1000 bytes).
double throughput_kb(std::uint64_t packets, std::uint64_t data_bits);

// Rounds at which residual energy is reported in summaries.
inline constexpr std::uint32_t kResidualCheckpoints[] = {50, 100, 200, 300, 400};

struct Summary {
  std::optional<std::uint32_t> fnd;
  std::optional<std::uint32_t> hna;
  double throughput_kb = 0.0;
  std::map<std::uint32_t, double> residual_at;
};

Summary summarize(std::span<const RoundMetrics> series, std::uint32_t node_count,
                  std::uint64_t data_bits);

struct MeanRow {
  std::uint32_t round = 0;
  double alive = 0.0;
  double dead = 0.0;
  double total_residual = 0.0;
  double packets_cum = 0.0;
  double failovers_cum = 0.0;
};

// Means over the runs where the metric is defined; `*_count` says how many.
struct MeanSummary {
  std::size_t runs = 0;
  std::optional<double> fnd;
  std::size_t fnd_count = 0;
  std::optional<double> hna;
  std::size_t hna_count = 0;
  double throughput_kb = 0.0;
  std::map<std::uint32_t, double> residual_at;
};

struct RunRecord {
  std::vector<RoundMetrics> series;
  Summary summary;
};

struct Averaged {
  std::vector<MeanRow> series;
  MeanSummary summary;
};

// Throws std::invalid_argument on an empty input or unequal horizons.
Averaged average_runs(std::span<const RunRecord> runs);

// ---- CSV -------------------------------------------------------------------

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kSeriesHeader =
    "round,alive,dead,total_residual_j,packets_cum_kb,failovers_cum";
inline constexpr const char* kSummaryHeader = "protocol,run,fnd,hna,throughput_kb";

// One CSV line of a series file, as written.
struct CsvRow {
  std::uint32_t round = 0;
  double alive = 0.0;
  double dead = 0.0;
  double total_residual_j = 0.0;
  double packets_cum_kb = 0.0;
  double failovers_cum = 0.0;

  friend bool operator==(const CsvRow&, const CsvRow&) = default;
};

std::vector<CsvRow> to_csv_rows(std::span<const RoundMetrics> series, std::uint64_t data_bits);
std::vector<CsvRow> to_csv_rows(std::span<const MeanRow> series, std::uint64_t data_bits);

// Shortest decimal string that parses back to the same double.
std::string format_number(double v);

void write_series_csv(const std::filesystem::path& path, std::span<const CsvRow> rows);
std::vector<CsvRow> read_series_csv(const std::filesystem::path& path);

struct SummaryRow {
  std::string protocol;
  std::string run;  // run index, or "mean"
  std::optional<double> fnd;
  std::optional<double> hna;
  double throughput_kb = 0.0;
};

void write_summary_csv(const std::filesystem::path& path, std::span<const SummaryRow> rows);

}  // namespace fihr::metrics
