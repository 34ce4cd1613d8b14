#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

namespace kz::cli {

struct Overrides {
  std::optional<std::string> output_dir;
  std::optional<std::uint64_t> seed;
};

// Parses and validates the JSON config, runs the experiment for every
// configured lambda, and writes one CSV/JSON artifact per (experiment,
// lambda) cell plus a final manifest.json. Nothing is written until the
// config has validated and all results are computed.
//
// Exit codes: 0 all invariants passed, 1 config error, 2 I/O error,
// 3 experiment ran but an invariant failed.
int run_config(const std::string& config_path, const Overrides& overrides,
               std::ostream& diag);

// One line per experiment kind; machine-readable with as_json.
void list_experiments(std::ostream& out, bool as_json);

}  // namespace kz::cli
