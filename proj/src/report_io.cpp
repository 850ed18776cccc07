#include "possim/report_io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace possim {

namespace {

using nlohmann::json;  // std::map-backed: keys serialize sorted, canonically

json merchant_json(const MerchantOutcome& m) {
  json j;
  j["name"] = m.name;
  j["region"] = m.region;
  j["payment_checkpoint"] = m.payment;
  j["value"] = m.value;
  if (m.accepted_at) j["accepted_at_tick"] = *m.accepted_at;
  else j["accepted_at_tick"] = nullptr;
  j["reverted"] = m.reverted;
  return j;
}

}  // namespace

std::string report_to_json(const ScenarioReport& report, const RunManifest& manifest) {
  json j;
  j["schema"] = kReportSchemaId;

  json m;
  m["spec_version"] = manifest.spec_version;
  m["tool_version"] = kToolVersion;
  m["config_digest"] = manifest.config_digest;
  m["seed"] = manifest.seed;
  m["report_path"] = manifest.report_path;
  m["series_path"] = manifest.series_path;
  m["trace_path"] = manifest.trace_path;
  j["manifest"] = m;

  j["scenario"] = {{"kind", report.scenario_kind},
                   {"duration_epochs", report.duration_epochs},
                   {"seed", report.seed}};

  json pairs = json::array();
  for (const auto& [a, b] : report.conflicting_finalizations) {
    pairs.push_back(json::array({a, b}));
  }
  j["conflicting_finalizations"] = pairs;

  json merchants = json::array();
  for (const MerchantOutcome& m2 : report.merchants) merchants.push_back(merchant_json(m2));
  j["merchants"] = {{"accepted", report.merchants_accepted},
                    {"defrauded_count", report.merchants_defrauded},
                    {"defrauded_value", report.defrauded_value},
                    {"detail", merchants}};

  j["attacker"] = {{"stake_burned", report.attacker_stake_burned},
                   {"realized_value", report.attacker_realized_value},
                   {"stake_price", report.stake_price},
                   {"net_value", report.attacker_net}};

  json fin;
  fin["halt_epochs"] = report.finalization_halt_epochs;
  if (report.resume_epoch) fin["resume_epoch"] = *report.resume_epoch;
  else fin["resume_epoch"] = nullptr;
  fin["finalized_total"] = report.finalized_total;
  j["finalization"] = fin;

  json res;
  res["description"] = report.resolution.description;
  if (report.resolution.surviving_branch) {
    res["surviving_branch"] = *report.resolution.surviving_branch;
  } else {
    res["surviving_branch"] = nullptr;
  }
  res["censored"] = report.resolution.censored;
  res["false_positive_censored"] = report.resolution.false_positive_censored;
  if (report.resolution.pre_price) res["pre_price"] = *report.resolution.pre_price;
  else res["pre_price"] = nullptr;
  if (report.resolution.post_fork_price) res["post_fork_price"] = *report.resolution.post_fork_price;
  else res["post_fork_price"] = nullptr;
  j["resolution"] = res;

  j["honest_leaked"] = report.honest_leaked;
  j["events_processed"] = report.events_processed;
  j["warnings"] = {{"ignored_votes", report.warnings.ignored_votes},
                   {"duplicate_slashes", report.warnings.duplicate_slashes},
                   {"buffer_rejects", report.warnings.buffer_rejects}};
  {
    std::ostringstream d;
    d << "fnv1a64:" << std::hex << fnv1a64(report.final_snapshot);
    j["final_state_digest"] = d.str();
  }

  return j.dump(2) + "\n";
}

std::string series_to_csv(const ScenarioReport& report) {
  std::ostringstream out;
  out << "epoch,open_tick,finalized_new,finalized_total,halted,attacker_stake,"
         "honest_stake,liquid,burned,evidence,merchants_accepted,leaked\n";
  for (const EpochRow& r : report.series) {
    out << r.epoch << ',' << r.open_tick << ',' << r.finalized_new << ','
        << r.finalized_total << ',' << (r.halted ? 1 : 0) << ',' << r.attacker_stake
        << ',' << r.honest_stake << ',' << r.liquid << ',' << r.burned << ','
        << r.evidence_count << ',' << r.merchants_accepted << ','
        << r.leaked_this_epoch << '\n';
  }
  return out.str();
}

std::string trace_to_text(const ScenarioReport& report, const RunManifest& manifest) {
  std::ostringstream out;
  out << "# " << kTraceSchemaId << " config=" << manifest.config_digest
      << " seed=" << manifest.seed << "\n";
  for (const std::string& line : report.trace) out << line << '\n';
  return out.str();
}

RunManifest write_report_files(const ScenarioReport& report,
                               const std::string& out_dir,
                               const std::string& config_digest_value) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);

  RunManifest manifest;
  manifest.config_digest = config_digest_value;
  manifest.seed = report.seed;
  manifest.report_path = "report.json";
  manifest.series_path = "series.csv";
  manifest.trace_path = "trace.log";

  const auto write = [&](const std::string& name, const std::string& content) {
    std::ofstream out(fs::path(out_dir) / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + name + " under " + out_dir);
    out << content;
  };
  write(manifest.series_path, series_to_csv(report));
  write(manifest.trace_path, trace_to_text(report, manifest));
  write(manifest.report_path, report_to_json(report, manifest));
  return manifest;
}

}  // namespace possim
