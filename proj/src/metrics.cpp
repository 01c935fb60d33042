#include "fihr/metrics.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace fihr::metrics {

std::optional<std::uint32_t> compute_fnd(std::span<const RoundMetrics> series) {
  for (const auto& r : series)
    if (r.dead >= 1) return r.round;
  return std::nullopt;
}

std::optional<std::uint32_t> compute_hna(std::span<const RoundMetrics> series,
                                         std::uint32_t node_count) {
  for (const auto& r : series)
    if (2ULL * r.alive <= node_count) return r.round;
  return std::nullopt;
}

double throughput_kb(std::uint64_t packets, std::uint64_t data_bits) {
  if (data_bits == 0) throw std::invalid_argument("data_bits must be positive");
  return static_cast<double>(packets) * static_cast<double>(data_bits) / 8.0 / 1000.0;
}

Summary summarize(std::span<const RoundMetrics> series, std::uint32_t node_count,
                  std::uint64_t data_bits) {
  Summary s;
  s.fnd = compute_fnd(series);
  s.hna = compute_hna(series, node_count);
  s.throughput_kb = series.empty() ? 0.0 : throughput_kb(series.back().packets_cum, data_bits);
  for (auto cp : kResidualCheckpoints)
    for (const auto& r : series)
      if (r.round == cp) s.residual_at[cp] = r.total_residual;
  return s;
}

Averaged average_runs(std::span<const RunRecord> runs) {
  if (runs.empty()) throw std::invalid_argument("average_runs needs at least one run");
  const auto horizon = runs.front().series.size();
  for (const auto& r : runs)
    if (r.series.size() != horizon)
      throw std::invalid_argument("average_runs: runs have different round horizons");

  const double n = static_cast<double>(runs.size());
  Averaged out;
  out.series.resize(horizon);
  for (std::size_t i = 0; i < horizon; ++i) {
    auto& m = out.series[i];
    m.round = runs.front().series[i].round;
    for (const auto& r : runs) {
      const auto& row = r.series[i];
      if (row.round != m.round)
        throw std::invalid_argument("average_runs: runs disagree on round numbering");
      m.alive += row.alive;
      m.dead += row.dead;
      m.total_residual += row.total_residual;
      m.packets_cum += static_cast<double>(row.packets_cum);
      m.failovers_cum += static_cast<double>(row.failovers_cum);
    }
    m.alive /= n;
    m.dead /= n;
    m.total_residual /= n;
    m.packets_cum /= n;
    m.failovers_cum /= n;
  }

  auto& s = out.summary;
  s.runs = runs.size();
  double fnd = 0.0, hna = 0.0;
  std::map<std::uint32_t, std::size_t> residual_counts;
  for (const auto& r : runs) {
    if (r.summary.fnd) {
      fnd += *r.summary.fnd;
      ++s.fnd_count;
    }
    if (r.summary.hna) {
      hna += *r.summary.hna;
      ++s.hna_count;
    }
    s.throughput_kb += r.summary.throughput_kb;
    for (const auto& [round, joules] : r.summary.residual_at) {
      s.residual_at[round] += joules;
      ++residual_counts[round];
    }
  }
  if (s.fnd_count) s.fnd = fnd / static_cast<double>(s.fnd_count);
  if (s.hna_count) s.hna = hna / static_cast<double>(s.hna_count);
  s.throughput_kb /= n;
  for (auto& [round, joules] : s.residual_at)
    joules /= static_cast<double>(residual_counts[round]);
  return out;
}

std::vector<CsvRow> to_csv_rows(std::span<const RoundMetrics> series, std::uint64_t data_bits) {
  std::vector<CsvRow> rows;
  rows.reserve(series.size());
  for (const auto& r : series)
    rows.push_back({r.round, static_cast<double>(r.alive), static_cast<double>(r.dead),
                    r.total_residual, throughput_kb(r.packets_cum, data_bits),
                    static_cast<double>(r.failovers_cum)});
  return rows;
}

std::vector<CsvRow> to_csv_rows(std::span<const MeanRow> series, std::uint64_t data_bits) {
  const double kb_per_packet = throughput_kb(1, data_bits);
  std::vector<CsvRow> rows;
  rows.reserve(series.size());
  for (const auto& r : series)
    rows.push_back({r.round, r.alive, r.dead, r.total_residual, r.packets_cum * kb_per_packet,
                    r.failovers_cum});
  return rows;
}

std::string format_number(double v) {
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buf, end);
}

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

double parse_number(std::string_view field, const std::filesystem::path& path, std::size_t line) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || ptr != field.data() + field.size())
    throw IoError(path.string() + ":" + std::to_string(line) + ": bad number '" +
                  std::string(field) + "'");
  return v;
}

}  // namespace

void write_series_csv(const std::filesystem::path& path, std::span<const CsvRow> rows) {
  auto out = open_for_write(path);
  out << kSeriesHeader << '\n';
  for (const auto& r : rows)
    out << r.round << ',' << format_number(r.alive) << ',' << format_number(r.dead) << ','
        << format_number(r.total_residual_j) << ',' << format_number(r.packets_cum_kb) << ','
        << format_number(r.failovers_cum) << '\n';
  finish(out, path);
}

std::vector<CsvRow> read_series_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::string line;
  if (!std::getline(in, line) || line != kSeriesHeader)
    throw IoError(path.string() + ": missing or unexpected header");
  std::vector<CsvRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    std::vector<std::string_view> f;
    std::string_view rest(line);
    for (;;) {
      auto comma = rest.find(',');
      f.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (f.size() != 6)
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": expected 6 fields");
    CsvRow r;
    r.round = static_cast<std::uint32_t>(parse_number(f[0], path, lineno));
    r.alive = parse_number(f[1], path, lineno);
    r.dead = parse_number(f[2], path, lineno);
    r.total_residual_j = parse_number(f[3], path, lineno);
    r.packets_cum_kb = parse_number(f[4], path, lineno);
    r.failovers_cum = parse_number(f[5], path, lineno);
    rows.push_back(r);
  }
  return rows;
}

void write_summary_csv(const std::filesystem::path& path, std::span<const SummaryRow> rows) {
  auto out = open_for_write(path);
  out << kSummaryHeader << '\n';
  for (const auto& r : rows) {
    out << r.protocol << ',' << r.run << ',';
    if (r.fnd) out << format_number(*r.fnd);
    out << ',';
    if (r.hna) out << format_number(*r.hna);
    out << ',' << format_number(r.throughput_kb) << '\n';
  }
  finish(out, path);
}

}  // namespace fihr::metrics
