#pragma once

#include <string>

#include "fsi/driver.hpp"

namespace fsi {

// Flat key = value configuration with '#' comments. Keys are namespaced by
// section (geometry, fluid, wall, scheme, boundary, output); a top-level
// `benchmark` key applies the preset first, remaining keys override it.
SimulationConfig parse_config(const std::string& text);

SimulationConfig load_config_file(const std::string& path);

// Fully resolved round-trippable form: parse(serialize(parse(x))) == parse(x).
std::string serialize_config(const SimulationConfig& cfg);

}  // namespace fsi
