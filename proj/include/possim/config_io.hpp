// Scenario config files: a strict line-oriented `key = value` format with a
// versioned schema line. Unknown keys are errors, so a typo cannot silently
// change a one-unit stake margin. See README for the full key reference.
#pragma once

#include <string>

#include "possim/scenario.hpp"

namespace possim {

// Parse error carrying file/line context; maps to CLI exit code 2.
class config_parse_error : public config_error {
 public:
  using config_error::config_error;
};

ScenarioConfig parse_scenario_config(const std::string& text,
                                     const std::string& source_name = "<config>");
ScenarioConfig load_scenario_config(const std::string& path);

// "fnv1a64:<16 hex digits>" over the raw config bytes.
std::string config_digest(const std::string& text);

// Parses "a/b" or a decimal like "0.05" into an exact reduced fraction.
Fraction parse_fraction(const std::string& text);

}  // namespace possim
