#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "flybot/error.hpp"

namespace flybot::flight {

inline constexpr double kStandardGravity = 9.80665;  // m/s^2

struct MassEntry {
  std::string name;
  double grams = 0.0;  // per piece
  int count = 1;
  bool operator==(const MassEntry&) const = default;
};

struct MassTable {
  std::vector<MassEntry> entries;
};

inline double total_mass(const MassTable& table) {
  double total = 0.0;
  for (const auto& e : table.entries) total += e.grams * e.count;
  return total;
}

/// Sizing inputs: w is the all-up mass in kg, n the rotor count and s the
/// safety factor applied as a multiplier (1.2 for a 20% margin).
struct ThrustSpec {
  double w = 0.0;
  int n = 4;
  double s = 1.2;
};

/// Required thrust per rotor, T = 2 w s / n, in kilograms-force.
inline double thrust_per_rotor(const ThrustSpec& spec) {
  if (spec.n != 4 && spec.n != 6 && spec.n != 8) {
    throw Error(ErrorCode::BadRotorCount, "rotor count must be 4, 6 or 8, got " + std::to_string(spec.n));
  }
  if (!(spec.s >= 1.0)) throw Error(ErrorCode::SubUnitySafetyFactor, "safety factor below 1");
  if (!(spec.w >= 0.0)) throw Error(ErrorCode::NegativeMass, "mass must be non-negative");
  return 2.0 * spec.w * spec.s / spec.n;
}

inline double kgf_to_newtons(double kgf) { return kgf * kStandardGravity; }

namespace detail {

inline std::string trim(std::string s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// Splits one CSV record; double-quoted fields may contain commas and "" escapes.
inline std::vector<std::string> split_csv(const std::string& line, int row) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back().push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back().push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back().push_back(c);
    }
  }
  if (quoted) throw Error(ErrorCode::ParseError, "row " + std::to_string(row) + ": unterminated quote");
  for (auto& f : fields) f = trim(f);
  return fields;
}

template <typename T>
T parse_number(const std::string& text, int row, const char* what) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    throw Error(ErrorCode::ParseError,
                "row " + std::to_string(row) + ": bad " + what + " '" + text + "'");
  }
  return value;
}

}  // namespace detail

/// Reads `name,grams,count` CSV. The header row is required; rows are
/// numbered from 1 at the header in error messages.
inline MassTable load_mass_table(std::istream& in) {
  MassTable table;
  std::string line;
  int row = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (detail::trim(line).empty()) continue;
    auto fields = detail::split_csv(line, row);
    if (!header_seen) {
      for (auto& f : fields)
        for (auto& ch : f) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
      if (fields != std::vector<std::string>{"name", "grams", "count"}) {
        throw Error(ErrorCode::ParseError, "row " + std::to_string(row) +
                                               ": expected header name,grams,count");
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != 3) {
      throw Error(ErrorCode::ParseError, "row " + std::to_string(row) + ": expected 3 columns");
    }
    const auto grams = detail::parse_number<double>(fields[1], row, "grams");
    const auto count = detail::parse_number<int>(fields[2], row, "count");
    if (!(grams >= 0.0) || !std::isfinite(grams)) {
      throw Error(ErrorCode::ParseError, "row " + std::to_string(row) + ": grams must be >= 0");
    }
    if (count < 1) throw Error(ErrorCode::ParseError, "row " + std::to_string(row) + ": count must be >= 1");
    table.entries.push_back({fields[0], grams, count});
  }
  if (!header_seen) throw Error(ErrorCode::ParseError, "row 1: missing header");
  return table;
}

inline MassTable load_mass_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  return load_mass_table(in);
}

}  // namespace flybot::flight
