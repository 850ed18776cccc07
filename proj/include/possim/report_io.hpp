// Report emission: canonical JSON (sorted keys, stable formatting),
// per-epoch CSV time series, and the line-delimited event trace. Output
// bytes are a pure function of (config, seed); no wall-clock data lands in
// any emitted file.
#pragma once

#include <string>

#include "possim/scenario.hpp"

namespace possim {

inline constexpr const char* kReportSchemaId = "possim-report-v1";
inline constexpr const char* kTraceSchemaId = "possim-trace-v1";
inline constexpr const char* kToolVersion = "0.1.0";

struct RunManifest {
  std::string spec_version = kReportSchemaId;
  std::string config_digest;
  std::uint64_t seed = 0;
  std::string report_path;
  std::string series_path;
  std::string trace_path;
  // Wall-clock timestamps are console-only; embedding them would make
  // report bytes depend on when the run happened.
  std::string started_at;
  std::string finished_at;
};

std::string report_to_json(const ScenarioReport& report, const RunManifest& manifest);
std::string series_to_csv(const ScenarioReport& report);
std::string trace_to_text(const ScenarioReport& report, const RunManifest& manifest);

// Writes report.json, series.csv, and trace.log under out_dir (created if
// missing). Returns the manifest with paths filled in.
RunManifest write_report_files(const ScenarioReport& report,
                               const std::string& out_dir,
                               const std::string& config_digest_value);

}  // namespace possim
