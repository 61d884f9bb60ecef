#pragma once

#include <string_view>

#include "mapof/scenario.hpp"
#include "mapof/tuning.hpp"

namespace mapof::testing {

inline const Gains kScenarioGains{3.77, 1.90, 20.0, 4.37};

inline SimSetup builtin_setup(std::string_view name, std::size_t run = 0) {
  const auto cfg = *find_builtin(name);
  const auto report = tune(cfg.gains, tuning_options(cfg));
  return make_setup(cfg, run, resolve_dwell(cfg, report));
}

}  // namespace mapof::testing
