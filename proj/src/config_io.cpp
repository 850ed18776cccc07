#include "possim/config_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace possim {

namespace {

struct Line {
  int number = 0;
  std::string key;
  std::vector<std::string> values;
};

[[noreturn]] void fail(const std::string& source, int line, const std::string& msg) {
  throw config_parse_error(source + ":" + std::to_string(line) + ": " + msg);
}

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string token;
  while (in >> token) out.push_back(token);
  return out;
}

std::uint64_t parse_u64(const std::string& source, int line, const std::string& text) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    fail(source, line, "expected unsigned integer, got '" + text + "'");
  }
  return value;
}

double parse_double(const std::string& source, int line, const std::string& text) {
  try {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    fail(source, line, "expected number, got '" + text + "'");
  }
}

bool parse_bool(const std::string& source, int line, const std::string& text) {
  if (text == "true") return true;
  if (text == "false") return false;
  fail(source, line, "expected true/false, got '" + text + "'");
}

void expect_values(const std::string& source, const Line& line, std::size_t n) {
  if (line.values.size() != n) {
    fail(source, line.number,
         "key '" + line.key + "' takes " + std::to_string(n) + " value(s), got " +
             std::to_string(line.values.size()));
  }
}

}  // namespace

Fraction parse_fraction(const std::string& text) {
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    const std::string num = text.substr(0, slash);
    const std::string den = text.substr(slash + 1);
    Fraction f{std::stoull(num), std::stoull(den)};
    if (f.den == 0) throw config_error("fraction with zero denominator: " + text);
    return f.reduced();
  }
  const auto dot = text.find('.');
  if (dot == std::string::npos) {
    return Fraction{std::stoull(text), 1};
  }
  const std::string whole = text.substr(0, dot);
  const std::string frac = text.substr(dot + 1);
  if (frac.empty() || frac.size() > 18) {
    throw config_error("cannot parse fraction: " + text);
  }
  Stake den = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
  const Stake num = std::stoull(whole.empty() ? "0" : whole) * den + std::stoull(frac);
  return Fraction{num, den}.reduced();
}

std::string config_digest(const std::string& text) {
  std::ostringstream out;
  out << "fnv1a64:" << std::hex << fnv1a64(text);
  return out.str();
}

ScenarioConfig parse_scenario_config(const std::string& text,
                                     const std::string& source) {
  ScenarioConfig config;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  bool saw_schema = false;
  std::map<std::string, int> group_index;

  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    auto tokens = tokenize(raw);
    if (tokens.empty()) continue;
    if (tokens.size() < 3 || tokens[1] != "=") {
      fail(source, line_no, "expected 'key = value...'");
    }
    Line line{line_no, tokens[0], {tokens.begin() + 2, tokens.end()}};

    if (!saw_schema) {
      if (line.key != "schema") fail(source, line_no, "first entry must be the schema id");
      expect_values(source, line, 1);
      if (line.values[0] != ScenarioConfig::kSchemaId) {
        fail(source, line_no, "unsupported schema '" + line.values[0] + "', expected " +
                                  ScenarioConfig::kSchemaId);
      }
      saw_schema = true;
      continue;
    }

    const std::string& key = line.key;
    const auto& v = line.values;
    if (key == "total_supply") {
      expect_values(source, line, 1);
      config.total_supply = parse_u64(source, line_no, v[0]);
    } else if (key == "seed") {
      expect_values(source, line, 1);
      config.seed = parse_u64(source, line_no, v[0]);
    } else if (key == "duration_epochs") {
      expect_values(source, line, 1);
      config.duration_epochs = parse_u64(source, line_no, v[0]);
    } else if (key == "block_interval_seconds") {
      expect_values(source, line, 1);
      config.block_interval = parse_u64(source, line_no, v[0]);
    } else if (key == "withdrawal_delay_seconds") {
      expect_values(source, line, 1);
      config.withdrawal_delay = parse_u64(source, line_no, v[0]);
    } else if (key == "vote_offset_ticks") {
      expect_values(source, line, 1);
      config.vote_offset = parse_u64(source, line_no, v[0]);
    } else if (key == "max_jitter_ticks") {
      expect_values(source, line, 1);
      config.max_jitter = parse_u64(source, line_no, v[0]);
    } else if (key == "enforce_liquidity_cap") {
      expect_values(source, line, 1);
      config.enforce_liquidity_cap = parse_bool(source, line_no, v[0]);
    } else if (key == "region") {
      expect_values(source, line, 1);
      config.latency.regions.push_back(v[0]);
    } else if (key == "delay_default") {
      expect_values(source, line, 1);
      config.latency.default_delay = parse_u64(source, line_no, v[0]);
    } else if (key == "delay") {
      expect_values(source, line, 3);
      const Tick d = parse_u64(source, line_no, v[2]);
      config.latency.delay[{v[0], v[1]}] = d;
      config.latency.delay[{v[1], v[0]}] = d;
    } else if (key == "delay_oneway") {
      expect_values(source, line, 3);
      config.latency.delay[{v[0], v[1]}] = parse_u64(source, line_no, v[2]);
    } else if (key == "partition") {
      expect_values(source, line, 4);
      LatencyModel::Partition p;
      p.a = v[0];
      p.b = v[1];
      p.start = parse_u64(source, line_no, v[2]);
      p.end = parse_u64(source, line_no, v[3]);
      if (p.end <= p.start) fail(source, line_no, "partition interval must be non-empty");
      config.latency.partitions.push_back(p);
    } else if (key == "group") {
      if (v.size() != 4 && v.size() != 5) {
        fail(source, line_no, "group takes: name region stake honest|attacker [count]");
      }
      ValidatorGroup g;
      g.name = v[0];
      g.region = v[1];
      g.stake = parse_u64(source, line_no, v[2]);
      if (v[3] == "honest") g.honest = true;
      else if (v[3] == "attacker") g.honest = false;
      else fail(source, line_no, "group role must be honest or attacker");
      if (v.size() == 5) g.count = static_cast<int>(parse_u64(source, line_no, v[4]));
      group_index[g.name] = static_cast<int>(config.groups.size());
      config.groups.push_back(std::move(g));
    } else if (key == "offline") {
      if (v.size() < 2) fail(source, line_no, "offline takes: group epoch...");
      auto it = group_index.find(v[0]);
      if (it == group_index.end()) fail(source, line_no, "offline: unknown group " + v[0]);
      for (std::size_t i = 1; i < v.size(); ++i) {
        config.groups[it->second].offline_epochs.insert(parse_u64(source, line_no, v[i]));
      }
    } else if (key == "attack") {
      expect_values(source, line, 1);
      if (v[0] == "none") config.attack.kind = AttackKind::none;
      else if (v[0] == "double_spend") config.attack.kind = AttackKind::double_spend;
      else if (v[0] == "sabotage") config.attack.kind = AttackKind::sabotage;
      else fail(source, line_no, "attack must be none|double_spend|sabotage");
    } else if (key == "merchant_regions") {
      expect_values(source, line, 2);
      config.attack.merchant_regions = {v[0], v[1]};
    } else if (key == "epsilon_units") {
      expect_values(source, line, 1);
      config.attack.epsilon_units = parse_u64(source, line_no, v[0]);
    } else if (key == "attack_start_epoch") {
      expect_values(source, line, 1);
      config.attack.start_epoch = parse_u64(source, line_no, v[0]);
    } else if (key == "resolution") {
      expect_values(source, line, 1);
      if (v[0] == "none") config.resolution.kind = ResolutionKind::none;
      else if (v[0] == "soft_fork_censor") config.resolution.kind = ResolutionKind::soft_fork_censor;
      else if (v[0] == "inactivity_leak") config.resolution.kind = ResolutionKind::inactivity_leak;
      else fail(source, line_no, "resolution must be none|soft_fork_censor|inactivity_leak");
    } else if (key == "leak_rate") {
      expect_values(source, line, 1);
      try {
        config.resolution.leak_rate = parse_fraction(v[0]);
      } catch (const std::exception&) {
        fail(source, line_no, "cannot parse leak rate '" + v[0] + "'");
      }
    } else if (key == "t_offline_epochs") {
      expect_values(source, line, 1);
      config.resolution.t_offline_epochs = parse_u64(source, line_no, v[0]);
    } else if (key == "branch_preference") {
      expect_values(source, line, 1);
      if (v[0] == "first_finalized") config.resolution.preference = BranchPreference::first_finalized;
      else if (v[0] == "most_burned") config.resolution.preference = BranchPreference::most_burned;
      else fail(source, line_no, "branch_preference must be first_finalized|most_burned");
    } else if (key == "merchant_value") {
      expect_values(source, line, 1);
      config.merchant_value = parse_double(source, line_no, v[0]);
    } else if (key == "econ_p_block") {
      expect_values(source, line, 1);
      config.econ.p_block = parse_double(source, line_no, v[0]);
    } else if (key == "econ_c") {
      expect_values(source, line, 1);
      config.econ.c = parse_double(source, line_no, v[0]);
    } else if (key == "econ_beta") {
      expect_values(source, line, 1);
      config.econ.beta = parse_double(source, line_no, v[0]);
    } else if (key == "econ_v_attack") {
      expect_values(source, line, 1);
      config.econ.v_attack = parse_double(source, line_no, v[0]);
    } else if (key == "econ_d_volume") {
      expect_values(source, line, 1);
      config.econ.d_volume = parse_double(source, line_no, v[0]);
    } else if (key == "econ_velocity") {
      expect_values(source, line, 1);
      config.econ.velocity = parse_double(source, line_no, v[0]);
    } else if (key == "econ_p_volatility") {
      expect_values(source, line, 1);
      config.econ.p_volatility = parse_double(source, line_no, v[0]);
    } else if (key == "econ_n_total") {
      expect_values(source, line, 1);
      config.econ.n_total = parse_double(source, line_no, v[0]);
    } else if (key == "econ_n_deposit") {
      expect_values(source, line, 1);
      config.econ.n_deposit = parse_double(source, line_no, v[0]);
    } else {
      fail(source, line_no, "unknown key '" + key + "'");
    }
  }

  if (!saw_schema) throw config_parse_error(source + ": empty config, schema line required");
  if (config.merchant_value == 0) config.merchant_value = config.econ.v_attack;
  return config;
}

ScenarioConfig load_scenario_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_parse_error(path + ": cannot open");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_config(buf.str(), path);
}

}  // namespace possim
