#include "manifest.hpp"

#include <cstdio>

namespace qbell::cli {

nlohmann::json RunManifest::to_json() const {
  return {{"command", command},
          {"params", params},
          {"tool_version", tool_version},
          {"duration_seconds", duration_seconds}};
}

void RunManifest::write_csv_comments(std::ostream& out) const {
  out << "# command = " << command << "\n";
  for (const auto& [key, value] : params) out << "# " << key << " = " << value << "\n";
  out << "# tool_version = " << tool_version << "\n";
  out << "# duration_seconds = " << format_double(duration_seconds) << "\n";
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

} // namespace qbell::cli
