#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace uhsec {

inline constexpr const char* kToolVersion = "uhsec 0.1.0";

using ordered_json = nlohmann::ordered_json;

/// Rounds to `digits` significant decimal digits so that serialized reports
/// are short and byte-stable.
inline double round_sig(double v, int digits = 12) {
  if (v == 0 || !std::isfinite(v)) return v;
  const double mag = std::floor(std::log10(std::abs(v)));
  const double scale = std::pow(10.0, double(digits - 1) - mag);
  return std::round(v * scale) / scale;
}

/// JSON value for a measured quantity; infinities become strings since JSON
/// has no representation for them.
inline ordered_json num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return round_sig(v);
}

struct Check {
  std::string name;
  double value = 0;
  double bound = 0;
  bool pass = false;
  std::string note;
};

/// One machine-diffable report per command: stable key order, numeric values
/// rounded to 12 significant digits, human summary on stderr.
struct Report {
  std::string command;
  std::uint64_t master_seed = 0;
  ordered_json params = ordered_json::object();
  ordered_json values = ordered_json::object();
  std::vector<Check> checks;
  std::vector<std::string> warnings;

  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }

  void add_check(const std::string& name, double value, double bound, bool pass,
                 const std::string& note = "") {
    checks.push_back({name, value, bound, pass, note});
  }

  ordered_json to_json() const {
    ordered_json j;
    j["tool"] = kToolVersion;
    j["command"] = command;
    j["master_seed"] = master_seed;
    j["params"] = params;
    j["values"] = values;
    ordered_json arr = ordered_json::array();
    for (const auto& c : checks) {
      ordered_json cj;
      cj["name"] = c.name;
      cj["value"] = num(c.value);
      cj["bound"] = num(c.bound);
      cj["pass"] = c.pass;
      if (!c.note.empty()) cj["note"] = c.note;
      arr.push_back(cj);
    }
    j["checks"] = arr;
    j["warnings"] = warnings;
    j["all_pass"] = all_pass();
    return j;
  }

  std::string to_bytes() const { return to_json().dump(2) + "\n"; }
};

}  // namespace uhsec
