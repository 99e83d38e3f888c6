#pragma once

// JSON/CSV serialization. Sequence schema:
//   {"prefix": [numbers], "tail": {"kind": "zero"} | {"kind": "power", "c": c, "sigma": s}}
// Round-trips are value-exact for doubles (shortest round-trip printing).

#include <string>

#include "json.hpp"
#include "lpq/seqcore.hpp"

namespace lpq {

nlohmann::json seq_to_json(const Seq& s);
Seq seq_from_json(const nlohmann::json& j);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// Fixed CSV number format (repeatable across runs).
std::string format_csv(double v);

}  // namespace lpq
