#include "fihr/report.hpp"

#include <string>
#include <system_error>

namespace fihr::report {

std::vector<metrics::SummaryRow> summary_rows(const sim::SimulationResult& result) {
  const std::string name(proto::to_string(result.protocol));
  std::vector<metrics::SummaryRow> rows;
  for (std::size_t k = 0; k < result.runs.size(); ++k) {
    const auto& s = result.runs[k].summary;
    metrics::SummaryRow row{name, std::to_string(k), std::nullopt, std::nullopt, s.throughput_kb};
    if (s.fnd) row.fnd = *s.fnd;
    if (s.hna) row.hna = *s.hna;
    rows.push_back(row);
  }
  const auto& m = result.mean.summary;
  rows.push_back({name, "mean", m.fnd, m.hna, m.throughput_kb});
  return rows;
}

std::vector<std::filesystem::path> emit_csv(std::span<const sim::SimulationResult> results,
                                            const std::filesystem::path& dir,
                                            std::string_view scenario) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw metrics::IoError("cannot create '" + dir.string() + "': " + ec.message());

  std::vector<std::filesystem::path> written;
  std::vector<metrics::SummaryRow> summary;
  for (const auto& result : results) {
    const std::string stem =
        std::string(proto::to_string(result.protocol)) + "_" + std::string(scenario);
    for (std::size_t k = 0; k < result.runs.size(); ++k) {
      auto path = dir / (stem + "_run" + std::to_string(k) + ".csv");
      metrics::write_series_csv(path, metrics::to_csv_rows(result.runs[k].series, result.data_bits));
      written.push_back(std::move(path));
    }
    auto mean_path = dir / (stem + "_mean.csv");
    metrics::write_series_csv(mean_path, metrics::to_csv_rows(result.mean.series, result.data_bits));
    written.push_back(std::move(mean_path));

    auto rows = summary_rows(result);
    summary.insert(summary.end(), rows.begin(), rows.end());
  }
  auto summary_path = dir / "summary.csv";
  metrics::write_summary_csv(summary_path, summary);
  written.push_back(std::move(summary_path));
  return written;
}

}  // namespace fihr::report
