#include "fsi/config.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "fsi/bench.hpp"

namespace fsi {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct KeyValues {
  std::vector<std::pair<std::string, std::string>> items;

  const std::string* find(const std::string& key) const {
    for (const auto& kv : items)
      if (kv.first == key) return &kv.second;
    return nullptr;
  }
};

double parse_double(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0')
    throw ConfigError("config: key '" + key + "' has a non-numeric value '" + value + "'");
  return v;
}

int parse_int(const std::string& key, const std::string& value) {
  const double v = parse_double(key, value);
  const int i = static_cast<int>(v);
  if (v != i) throw ConfigError("config: key '" + key + "' must be an integer");
  return i;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "on" || value == "1") return true;
  if (value == "false" || value == "off" || value == "0") return false;
  throw ConfigError("config: key '" + key + "' must be a boolean");
}

const char* kKnownKeys[] = {
    "benchmark",         "geometry.L",          "geometry.R",
    "geometry.nz",       "geometry.nr",         "fluid.rho",
    "fluid.mu",          "wall.E",              "wall.sigma",
    "wall.Cv",           "wall.Dv",             "wall.rho_s",
    "wall.h",            "wall.model",          "wall.k",
    "wall.G",            "wall.gamma",          "wall.bc",
    "wall.longitudinal", "wall.C0_override",    "scheme.dt",
    "scheme.t_final",    "scheme.beta",         "boundary.kind",
    "boundary.p_max",    "boundary.t_max",      "boundary.p_in",
    "boundary.p_out",    "boundary.waveform",   "boundary.period",
    "boundary.drop_mmhg_per_cm",                "output.dir",
    "output.snapshot_every",
};

}  // namespace

SimulationConfig parse_config(const std::string& text) {
  KeyValues kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: line " + std::to_string(lineno) + " is not 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (std::find_if(std::begin(kKnownKeys), std::end(kKnownKeys),
                     [&](const char* k) { return key == k; }) == std::end(kKnownKeys))
      throw ConfigError("config: unknown key '" + key + "'");
    if (value.empty()) throw ConfigError("config: key '" + key + "' has an empty value");
    kv.items.emplace_back(key, value);
  }

  SimulationConfig cfg;
  bool have_preset = false;
  if (const std::string* b = kv.find("benchmark")) {
    cfg = benchmark_config(benchmark_from_string(*b));
    have_preset = true;
  }

  auto require = [&](const char* key) {
    if (!kv.find(key) && !have_preset)
      throw ConfigError(std::string("config: missing required key '") + key + "'");
  };
  for (const char* key : {"geometry.L", "geometry.R", "geometry.nz", "geometry.nr", "fluid.rho",
                          "fluid.mu", "wall.E", "wall.sigma", "wall.rho_s", "wall.h", "scheme.dt",
                          "scheme.t_final", "scheme.beta", "boundary.kind"})
    require(key);

  std::string wall_model = cfg.formaggia ? "formaggia" : "koiter";
  std::string bkind;
  switch (cfg.boundary.kind) {
    case BoundaryData::Kind::pulse: bkind = "pulse"; break;
    case BoundaryData::Kind::waveform: bkind = "waveform"; break;
    case BoundaryData::Kind::constant: bkind = "constant"; break;
  }
  FormaggiaParams fp = cfg.formaggia.value_or(FormaggiaParams{});
  BoundaryData bd = cfg.boundary;
  double drop_mmhg_per_cm =
      (bd.kind == BoundaryData::Kind::waveform && cfg.L > 0.0)
          ? bd.mean_drop / (kDynPerMmHg * cfg.L)
          : 0.0;

  for (const auto& [key, value] : kv.items) {
    if (key == "benchmark") continue;
    if (key == "geometry.L") cfg.L = parse_double(key, value);
    else if (key == "geometry.R") cfg.wall.R = parse_double(key, value);
    else if (key == "geometry.nz") cfg.nz = parse_int(key, value);
    else if (key == "geometry.nr") cfg.nr = parse_int(key, value);
    else if (key == "fluid.rho") cfg.fluid.rho_f = parse_double(key, value);
    else if (key == "fluid.mu") cfg.fluid.mu = parse_double(key, value);
    else if (key == "wall.E") cfg.wall.E = parse_double(key, value);
    else if (key == "wall.sigma") cfg.wall.sigma = parse_double(key, value);
    else if (key == "wall.Cv") cfg.wall.Cv = parse_double(key, value);
    else if (key == "wall.Dv") cfg.wall.Dv = parse_double(key, value);
    else if (key == "wall.rho_s") cfg.wall.rho_s = parse_double(key, value);
    else if (key == "wall.h") cfg.wall.h = parse_double(key, value);
    else if (key == "wall.model") {
      if (value != "koiter" && value != "formaggia")
        throw ConfigError("config: wall.model must be koiter or formaggia");
      wall_model = value;
    } else if (key == "wall.k") fp.k = parse_double(key, value);
    else if (key == "wall.G") fp.G = parse_double(key, value);
    else if (key == "wall.gamma") fp.gamma = parse_double(key, value);
    else if (key == "wall.bc") {
      if (value == "clamped") cfg.wall_bc = ShellBc::clamped;
      else if (value == "absorbing") cfg.wall_bc = ShellBc::absorbing;
      else throw ConfigError("config: wall.bc must be clamped or absorbing");
    } else if (key == "wall.longitudinal") cfg.longitudinal = parse_bool(key, value);
    else if (key == "wall.C0_override") cfg.C0_override = parse_double(key, value);
    else if (key == "scheme.dt") cfg.dt = parse_double(key, value);
    else if (key == "scheme.t_final") cfg.t_final = parse_double(key, value);
    else if (key == "scheme.beta") {
      cfg.beta = parse_double(key, value);
      if (!(cfg.beta >= 0.0 && cfg.beta <= 1.0))
        throw ConfigError("config: key 'scheme.beta' out of range [0,1]");
    } else if (key == "boundary.kind") {
      if (value != "pulse" && value != "waveform" && value != "constant")
        throw ConfigError("config: boundary.kind must be pulse, waveform or constant");
      bkind = value;
    } else if (key == "boundary.p_max") bd.p_max = parse_double(key, value);
    else if (key == "boundary.t_max") bd.t_max = parse_double(key, value);
    else if (key == "boundary.p_in") bd.p_in_const = parse_double(key, value);
    else if (key == "boundary.p_out") bd.p_out_const = parse_double(key, value);
    else if (key == "boundary.waveform") bd.waveform_path = value;
    else if (key == "boundary.period") bd.period = parse_double(key, value);
    else if (key == "boundary.drop_mmhg_per_cm") drop_mmhg_per_cm = parse_double(key, value);
    else if (key == "output.dir") cfg.output_dir = value;
    else if (key == "output.snapshot_every") cfg.snapshot_every = parse_int(key, value);
  }

  cfg.formaggia.reset();
  if (wall_model == "formaggia") cfg.formaggia = fp;

  if (bkind == "pulse") {
    cfg.boundary = BoundaryData::pulse(bd.p_max, bd.t_max);
  } else if (bkind == "constant") {
    cfg.boundary = BoundaryData::constant(bd.p_in_const, bd.p_out_const);
  } else {
    if (bd.waveform_path.empty())
      throw ConfigError("config: missing required key 'boundary.waveform'");
    if (!(bd.period > 0.0))
      throw ConfigError("config: missing required key 'boundary.period'");
    cfg.boundary =
        load_waveform(bd.waveform_path, bd.period, drop_mmhg_per_cm * kDynPerMmHg * cfg.L);
  }

  cfg.validate();
  return cfg;
}

SimulationConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const SimulationConfig& cfg) {
  std::ostringstream out;
  out << "# fsi solver configuration (resolved)\n";
  if (cfg.benchmark) out << "benchmark = " << to_string(*cfg.benchmark) << "\n";
  out << "geometry.L = " << fmt17(cfg.L) << "\n";
  out << "geometry.R = " << fmt17(cfg.wall.R) << "\n";
  out << "geometry.nz = " << cfg.nz << "\n";
  out << "geometry.nr = " << cfg.nr << "\n";
  out << "fluid.rho = " << fmt17(cfg.fluid.rho_f) << "\n";
  out << "fluid.mu = " << fmt17(cfg.fluid.mu) << "\n";
  out << "wall.E = " << fmt17(cfg.wall.E) << "\n";
  out << "wall.sigma = " << fmt17(cfg.wall.sigma) << "\n";
  out << "wall.Cv = " << fmt17(cfg.wall.Cv) << "\n";
  out << "wall.Dv = " << fmt17(cfg.wall.Dv) << "\n";
  out << "wall.rho_s = " << fmt17(cfg.wall.rho_s) << "\n";
  out << "wall.h = " << fmt17(cfg.wall.h) << "\n";
  out << "wall.model = " << (cfg.formaggia ? "formaggia" : "koiter") << "\n";
  if (cfg.formaggia) {
    out << "wall.k = " << fmt17(cfg.formaggia->k) << "\n";
    out << "wall.G = " << fmt17(cfg.formaggia->G) << "\n";
    out << "wall.gamma = " << fmt17(cfg.formaggia->gamma) << "\n";
  }
  if (cfg.C0_override) out << "wall.C0_override = " << fmt17(*cfg.C0_override) << "\n";
  out << "wall.bc = " << (cfg.wall_bc == ShellBc::clamped ? "clamped" : "absorbing") << "\n";
  out << "wall.longitudinal = " << (cfg.longitudinal ? "true" : "false") << "\n";
  out << "scheme.dt = " << fmt17(cfg.dt) << "\n";
  out << "scheme.t_final = " << fmt17(cfg.t_final) << "\n";
  out << "scheme.beta = " << fmt17(cfg.beta) << "\n";
  switch (cfg.boundary.kind) {
    case BoundaryData::Kind::pulse:
      out << "boundary.kind = pulse\n";
      out << "boundary.p_max = " << fmt17(cfg.boundary.p_max) << "\n";
      out << "boundary.t_max = " << fmt17(cfg.boundary.t_max) << "\n";
      break;
    case BoundaryData::Kind::constant:
      out << "boundary.kind = constant\n";
      out << "boundary.p_in = " << fmt17(cfg.boundary.p_in_const) << "\n";
      out << "boundary.p_out = " << fmt17(cfg.boundary.p_out_const) << "\n";
      break;
    case BoundaryData::Kind::waveform:
      out << "boundary.kind = waveform\n";
      out << "boundary.waveform = " << cfg.boundary.waveform_path << "\n";
      out << "boundary.period = " << fmt17(cfg.boundary.period) << "\n";
      out << "boundary.drop_mmhg_per_cm = "
          << fmt17(cfg.boundary.mean_drop / (kDynPerMmHg * cfg.L)) << "\n";
      break;
  }
  if (!cfg.output_dir.empty()) out << "output.dir = " << cfg.output_dir << "\n";
  if (cfg.snapshot_every > 0) out << "output.snapshot_every = " << cfg.snapshot_every << "\n";
  return out.str();
}

}  // namespace fsi
