#include "possim/cli.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include "possim/config_io.hpp"
#include "possim/economics.hpp"

namespace possim::cli {

namespace {

std::string now_utc() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%FT%TZ");
  return out.str();
}

double need(const EconArgs& args, const std::string& flag) {
  auto it = args.flags.find(flag);
  if (it == args.flags.end()) {
    throw econ::econ_domain_error("missing required flag --" + flag);
  }
  if (!std::isfinite(it->second)) {
    throw econ::econ_domain_error("flag --" + flag + " must be finite");
  }
  return it->second;
}

std::optional<double> maybe(const EconArgs& args, const std::string& flag) {
  auto it = args.flags.find(flag);
  if (it == args.flags.end()) return std::nullopt;
  return it->second;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_parse_error(path + ": cannot open");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void apply_field(ScenarioConfig& config, const std::string& field, double value) {
  if (field == "econ_p_block") config.econ.p_block = value;
  else if (field == "econ_c") config.econ.c = value;
  else if (field == "econ_beta") config.econ.beta = value;
  else if (field == "econ_v_attack") config.econ.v_attack = value;
  else if (field == "econ_p_volatility") config.econ.p_volatility = value;
  else if (field == "econ_n_total") config.econ.n_total = value;
  else if (field == "econ_n_deposit") config.econ.n_deposit = value;
  else if (field == "econ_d_volume") config.econ.d_volume = value;
  else if (field == "econ_velocity") config.econ.velocity = value;
  else if (field.rfind("stake:", 0) == 0) {
    const std::string name = field.substr(6);
    for (ValidatorGroup& g : config.groups) {
      if (g.name == name) {
        g.stake = static_cast<Stake>(value);
        return;
      }
    }
    throw config_error("sweep field names unknown group: " + name);
  } else {
    throw config_error("unknown sweep field: " + field);
  }
}

SweepRow evaluate_point(const ScenarioConfig& base, const std::string& field,
                        int index, double value, bool with_sim) {
  ScenarioConfig config = base;
  apply_field(config, field, value);
  SweepRow row;
  row.index = index;
  row.value = value;

  const EconomicInputs& e = config.econ;
  if (e.beta >= 0 && e.beta < 1) {
    row.beta = e.beta;
    row.alpha = econ::alpha_ether(e.beta);
    if (e.c > 0) {
      row.price = econ::price_from_flow(e.c, e.beta);
      row.n_star = econ::equilibrium_stake(e.p_block, e.c);
      row.n_attack = *row.n_star / 2.0;
      row.safe_value = econ::max_safe_attack_value(e.p_block, *row.alpha);
      row.deterred = econ::incentive_compatible(e.v_attack, *row.n_attack, *row.price);
    }
  }
  if (e.n_total > 0 && (e.p_block > 0 || e.p_volatility > 0)) {
    row.n_deposit_star = econ::equilibrium_deposit(e.p_block, e.p_volatility, e.n_total);
  }
  if (e.n_deposit > 0 && e.n_total > e.n_deposit) {
    row.c_at_deposit = e.p_block / e.n_deposit;
    row.r_liquid_at_liquid = econ::liquid_payoff(e.p_volatility, e.n_total - e.n_deposit);
  }

  if (with_sim) {
    const ScenarioReport report = run_scenario(config);
    row.halt_epochs = report.finalization_halt_epochs;
    row.conflicting_pairs = report.conflicting_finalizations.size();
    row.attacker_burned = report.attacker_stake_burned;
  }
  return row;
}

template <typename T>
void put(std::ostream& out, const std::optional<T>& v) {
  if (v.has_value()) {
    if constexpr (std::is_same_v<T, bool>) out << (*v ? 1 : 0);
    else out << *v;
  }
}

}  // namespace

std::vector<SweepRow> sweep_grid(const ScenarioConfig& base, const SweepArgs& args) {
  std::vector<double> values = args.values;
  if (values.empty()) {
    if (args.steps < 1) throw config_error("sweep needs --values or --steps >= 1");
    for (int i = 0; i < args.steps; ++i) {
      const double t = args.steps == 1 ? 0.0
                                       : static_cast<double>(i) / (args.steps - 1);
      values.push_back(args.from + t * (args.to - args.from));
    }
  }

  std::vector<SweepRow> rows(values.size());
  const int jobs = std::max(1, args.jobs);
  if (jobs == 1 || values.size() <= 1) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      rows[i] = evaluate_point(base, args.field, static_cast<int>(i), values[i],
                               args.with_sim);
    }
    return rows;
  }

  // Fan runs out across workers; each point owns its state, and rows land
  // by grid index regardless of completion order.
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> errors(jobs);
  for (int w = 0; w < jobs; ++w) {
    workers.emplace_back([&, w] {
      try {
        for (std::size_t i = next.fetch_add(1); i < values.size();
             i = next.fetch_add(1)) {
          rows[i] = evaluate_point(base, args.field, static_cast<int>(i), values[i],
                                   args.with_sim);
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (std::thread& t : workers) t.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

std::string sweep_csv(const std::string& field, const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "index,field,value,beta,alpha,n_star,price,n_attack,safe_value,deterred,"
         "n_deposit_star,c_at_deposit,r_liquid_at_liquid,halt_epochs,"
         "conflicting_pairs,attacker_burned\n";
  for (const SweepRow& r : rows) {
    out << r.index << ',' << field << ',' << r.value << ',';
    put(out, r.beta); out << ',';
    put(out, r.alpha); out << ',';
    put(out, r.n_star); out << ',';
    put(out, r.price); out << ',';
    put(out, r.n_attack); out << ',';
    put(out, r.safe_value); out << ',';
    put(out, r.deterred); out << ',';
    put(out, r.n_deposit_star); out << ',';
    put(out, r.c_at_deposit); out << ',';
    put(out, r.r_liquid_at_liquid); out << ',';
    put(out, r.halt_epochs); out << ',';
    put(out, r.conflicting_pairs); out << ',';
    put(out, r.attacker_burned); out << '\n';
  }
  return out.str();
}

int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err) {
  std::string text;
  ScenarioConfig config;
  try {
    text = read_file(args.config_path);
    config = parse_scenario_config(text, args.config_path);
    if (args.seed_override) config.seed = *args.seed_override;
    config.validate();
  } catch (const config_error& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  const std::string started = now_utc();
  ScenarioReport report;
  try {
    report = run_scenario(config);
  } catch (const livelock_suspected& e) {
    err << "simulation error: " << e.what() << "\n";
    return kExitLivelock;
  } catch (const config_error& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  RunManifest manifest = write_report_files(report, args.out_dir, config_digest(text));
  manifest.started_at = started;
  manifest.finished_at = now_utc();

  out << "scenario " << report.scenario_kind << " seed " << report.seed
      << " config " << manifest.config_digest << "\n";
  out << "started " << manifest.started_at << " finished " << manifest.finished_at
      << " events " << report.events_processed << "\n";
  out << "finalized " << report.finalized_total << " checkpoints; conflicting pairs "
      << report.conflicting_finalizations.size() << "; halt epochs "
      << report.finalization_halt_epochs << "\n";
  out << "merchants accepted " << report.merchants_accepted << ", defrauded "
      << report.merchants_defrauded << "; attacker burned "
      << report.attacker_stake_burned << " units\n";
  out << "resolution: " << report.resolution.description << "\n";
  out << "wrote " << args.out_dir << "/report.json, series.csv, trace.log\n";
  return kExitOk;
}

int cmd_econ(const EconArgs& args, std::ostream& out, std::ostream& err) {
  std::vector<std::pair<std::string, double>> results;
  const auto emit = [&](const std::string& name, double value) {
    results.emplace_back(name, value);
  };

  try {
    const std::string& sub = args.subcommand;
    if (sub == "alpha") {
      double beta;
      if (auto b = maybe(args, "beta")) {
        beta = *b;
        emit("beta", beta);
      } else {
        const double annual = need(args, "annual-discount");
        const double seconds = need(args, "block-seconds");
        beta = econ::beta_per_block(annual, seconds);
        emit("annual_discount", annual);
        emit("block_seconds", seconds);
        emit("beta", beta);
      }
      emit("alpha_ether", econ::alpha_ether(beta));
      emit("alpha_pow_benchmark", econ::kAlphaPowBenchmark);
      emit("alpha_ratio_vs_pow", econ::alpha_ether(beta) / econ::kAlphaPowBenchmark);
    } else if (sub == "safe-value") {
      const double p_block = need(args, "p-block");
      double alpha;
      if (auto a = maybe(args, "alpha")) alpha = *a;
      else alpha = econ::alpha_ether(need(args, "beta"));
      emit("p_block", p_block);
      emit("alpha", alpha);
      emit("max_safe_attack_value", econ::max_safe_attack_value(p_block, alpha));
    } else if (sub == "equilibrium-stake") {
      const double p_block = need(args, "p-block");
      const double c = need(args, "c");
      emit("p_block", p_block);
      emit("c", c);
      emit("n_star", econ::equilibrium_stake(p_block, c));
    } else if (sub == "price") {
      const double c = need(args, "c");
      const double beta = need(args, "beta");
      emit("c", c);
      emit("beta", beta);
      emit("price", econ::price_from_flow(c, beta));
    } else if (sub == "deterrence") {
      const double v_attack = need(args, "v-attack");
      emit("v_attack", v_attack);
      double n_attack, price;
      if (maybe(args, "n-attack") && maybe(args, "price")) {
        n_attack = need(args, "n-attack");
        price = need(args, "price");
      } else {
        const double p_block = need(args, "p-block");
        const double c = need(args, "c");
        const double beta = need(args, "beta");
        const double n_star = econ::equilibrium_stake(p_block, c);
        n_attack = n_star / 2.0;
        price = econ::price_from_flow(c, beta);
        emit("n_star", n_star);
      }
      emit("n_attack", n_attack);
      emit("price", price);
      emit("attack_cost", n_attack * price);
      emit("deterred", econ::incentive_compatible(v_attack, n_attack, price) ? 1 : 0);
    } else if (sub == "equilibrium-deposit") {
      const double p_block = need(args, "p-block");
      const double p_vol = need(args, "p-vol");
      const double n_total = need(args, "n-total");
      emit("p_block", p_block);
      emit("p_volatility", p_vol);
      emit("n_total", n_total);
      const double n_dep = econ::equilibrium_deposit(p_block, p_vol, n_total);
      emit("n_deposit_star", n_dep);
      emit("n_liquid_star", n_total - n_dep);
    } else if (sub == "velocity") {
      const double d = need(args, "d");
      const double v = need(args, "v");
      const double n_liquid = need(args, "n-liquid");
      emit("d_volume", d);
      emit("velocity", v);
      emit("n_liquid", n_liquid);
      emit("price", econ::velocity_price(d, v, n_liquid));
    } else {
      err << "unknown econ subcommand: " << sub << "\n";
      return kExitConfig;
    }
  } catch (const econ::econ_domain_error& e) {
    err << "econ error: " << e.what() << "\n";
    return kExitConfig;
  }

  out << std::setprecision(12);
  for (const auto& [name, value] : results) {
    out << name << " = " << value << "\n";
  }
  if (args.csv_path) {
    std::ofstream csv(*args.csv_path);
    if (!csv) {
      err << "cannot write " << *args.csv_path << "\n";
      return kExitError;
    }
    csv << std::setprecision(17) << "name,value\n";
    for (const auto& [name, value] : results) csv << name << ',' << value << '\n';
  }
  return kExitOk;
}

int cmd_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err) {
  ScenarioConfig base;
  try {
    base = load_scenario_config(args.config_path);
    if (args.with_sim) base.validate();
  } catch (const config_error& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  std::vector<SweepRow> rows;
  try {
    rows = sweep_grid(base, args);
  } catch (const livelock_suspected& e) {
    err << "simulation error: " << e.what() << "\n";
    return kExitLivelock;
  } catch (const std::exception& e) {
    err << "sweep error: " << e.what() << "\n";
    return kExitConfig;
  }

  const std::string csv = sweep_csv(args.field, rows);
  if (args.out_csv.empty()) {
    out << csv;
  } else {
    std::ofstream file(args.out_csv);
    if (!file) {
      err << "cannot write " << args.out_csv << "\n";
      return kExitError;
    }
    file << csv;
    out << "wrote " << rows.size() << " rows to " << args.out_csv << "\n";
  }
  return kExitOk;
}

int cmd_replay(const ReplayArgs& args, std::ostream& out, std::ostream& err) {
  std::string text;
  ScenarioConfig config;
  try {
    text = read_file(args.config_path);
    config = parse_scenario_config(text, args.config_path);
    if (args.seed_override) config.seed = *args.seed_override;
    config.validate();
  } catch (const config_error& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  std::ifstream trace_file(args.trace_path, std::ios::binary);
  if (!trace_file) {
    err << "cannot open trace " << args.trace_path << "\n";
    return kExitConfig;
  }

  ScenarioReport report = run_scenario(config);
  RunManifest manifest;
  manifest.config_digest = config_digest(text);
  manifest.seed = config.seed;
  const std::string expected = trace_to_text(report, manifest);

  std::istringstream fresh(expected);
  std::string got, want;
  std::size_t line_no = 0;
  while (true) {
    const bool have_got = static_cast<bool>(std::getline(trace_file, got));
    const bool have_want = static_cast<bool>(std::getline(fresh, want));
    ++line_no;
    if (!have_got && !have_want) break;
    if (have_got != have_want || got != want) {
      err << "trace mismatch at line " << line_no << "\n";
      if (have_want) err << "  expected: " << want << "\n";
      if (have_got) err << "  recorded: " << got << "\n";
      return kExitError;
    }
  }
  out << "trace verified: " << (line_no - 1) << " lines match\n";
  return kExitOk;
}

}  // namespace possim::cli
