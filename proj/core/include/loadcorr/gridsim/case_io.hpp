#pragma once

#include <filesystem>
#include <string>

#include "loadcorr/gridsim/case.hpp"

namespace loadcorr::grid {

/// Parses the JSON case format:
///
///   { "name": ..., "base_mva": 100, "frequency": 60,
///     "buses":    [ {"id", "kind": "slack"|"pv"|"pq", "voltage_setpoint", "shunt_g", "shunt_b"} ],
///     "branches": [ {"name", "from", "to", "r", "x", "charging", "rating"} ],
///     "machines": [ {"bus", "H", "D", "xd_prime", "mechanical_power"} ],
///     "loads":    { "<bus id>": {"p", "q", "model": {"type": "zip"|"composite", ...}} } }
///
/// Quantities are per-unit on base_mva except H (seconds). Throws
/// GridError(CaseParseError) with the line number or field path at fault, and
/// GridError(InvalidCase) if the parsed case breaks an invariant.
NetworkCase case_from_json(const std::string& text);
NetworkCase load_case(const std::filesystem::path& path);

std::string case_to_json(const NetworkCase& c);
void save_case(const NetworkCase& c, const std::filesystem::path& path);

/// 64-bit FNV-1a of the bytes, as 16 hex digits.
std::string content_hash(std::string_view bytes);

}  // namespace loadcorr::grid
