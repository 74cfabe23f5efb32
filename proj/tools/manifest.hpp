// Run manifests: every emitted result file carries the command name and all
// resolved parameters, so a row can be reproduced from its file alone.

#pragma once

#include "json.hpp"

#include <cstdint>
#include <map>
#include <ostream>
#include <string>

namespace qbell::cli {

struct RunManifest {
  std::string command;
  std::map<std::string, std::string> params; // resolved, sorted by key
  std::string tool_version;
  double duration_seconds = 0.0;

  nlohmann::json to_json() const;
  // "# key = value" comment lines for CSV embedding.
  void write_csv_comments(std::ostream& out) const;
};

// Shortest round-trip formatting (17 significant digits).
std::string format_double(double v);

} // namespace qbell::cli
