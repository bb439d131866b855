#include "fsi/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fsi/bench.hpp"
#include "fsi/config.hpp"
#include "fsi/output.hpp"

namespace fsi {

namespace {

struct CommonOpts {
  std::string benchmark;
  std::string config_path;
  std::string out_dir = ".";
  std::string waveform;
  std::string mesh;  // NZxNR
  double dt = 0.0;
  double t_final = 0.0;
  double beta = -1.0;
  std::string bc;
  int snapshot_every = -1;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_run_opts) {
  cmd->add_option("--benchmark", o.benchmark, "benchmark preset: example1|example1b|example2|cca");
  cmd->add_option("--config", o.config_path, "configuration file");
  cmd->add_option("--out", o.out_dir, "output directory");
  cmd->add_option("--waveform", o.waveform, "override waveform CSV (two columns t,p)");
  cmd->add_option("--mesh", o.mesh, "coarse mesh resolution NZxNR, e.g. 31x11");
  if (with_run_opts) {
    cmd->add_option("--dt", o.dt, "time step (s)");
    cmd->add_option("--t-final", o.t_final, "final time (s)");
    cmd->add_option("--beta", o.beta, "splitting parameter in [0,1]");
    cmd->add_option("--bc", o.bc, "structure boundary condition: clamped|absorbing");
    cmd->add_option("--snapshot-every", o.snapshot_every, "VTK snapshot cadence in steps");
  }
}

SimulationConfig resolve_config(const CommonOpts& o) {
  SimulationConfig cfg;
  if (!o.config_path.empty())
    cfg = load_config_file(o.config_path);
  else if (!o.benchmark.empty())
    cfg = benchmark_config(benchmark_from_string(o.benchmark));
  else
    throw ConfigError("either --benchmark or --config is required");

  if (o.dt > 0.0) cfg.dt = o.dt;
  if (o.t_final > 0.0) cfg.t_final = o.t_final;
  if (o.beta >= 0.0) cfg.beta = o.beta;
  if (!o.bc.empty()) {
    if (o.bc == "clamped") cfg.wall_bc = ShellBc::clamped;
    else if (o.bc == "absorbing") cfg.wall_bc = ShellBc::absorbing;
    else throw ConfigError("--bc must be clamped or absorbing");
  }
  if (!o.mesh.empty()) {
    const auto x = o.mesh.find('x');
    if (x == std::string::npos) throw ConfigError("--mesh must look like NZxNR");
    cfg.nz = std::stoi(o.mesh.substr(0, x));
    cfg.nr = std::stoi(o.mesh.substr(x + 1));
  }
  if (!o.waveform.empty()) {
    if (cfg.boundary.kind != BoundaryData::Kind::waveform)
      throw ConfigError("--waveform requires a waveform boundary kind");
    cfg.boundary = load_waveform(o.waveform, cfg.boundary.period, cfg.boundary.mean_drop);
  }
  if (o.snapshot_every >= 0) cfg.snapshot_every = o.snapshot_every;
  cfg.output_dir = o.out_dir;
  cfg.validate();
  return cfg;
}

std::string snapshot_name(const std::string& dir, int step) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "snap_%06d.vtk", step);
  return dir + "/" + buf;
}

int do_run(const CommonOpts& o) {
  SimulationConfig cfg = resolve_config(o);
  std::filesystem::create_directories(cfg.output_dir);
  {
    std::ofstream out(cfg.output_dir + "/config.txt");
    out << serialize_config(cfg);
  }
  StepHook hook;
  if (cfg.snapshot_every > 0)
    hook = [&cfg](int step, const CoupledState& s) {
      if (step % cfg.snapshot_every == 0)
        write_vtk_snapshot(s, snapshot_name(cfg.output_dir, step));
    };
  RunWithSeries r = run_with_observables(cfg, hook);
  write_timeseries(r.series, cfg.output_dir + "/timeseries.csv");
  write_vtk_snapshot(r.final_state, cfg.output_dir + "/final.vtk");
  std::cout << "run finished at t=" << r.final_state.t << ", outputs in " << cfg.output_dir
            << std::endl;
  return 0;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(std::stod(item));
  if (v.empty()) throw ConfigError("empty list");
  return v;
}

int do_converge(const CommonOpts& o, const std::string& dt_list, double dt_ref, double t_eval) {
  SimulationConfig cfg = resolve_config(o);
  std::filesystem::create_directories(cfg.output_dir);
  ConvergenceReport rep = convergence_study(cfg, parse_list(dt_list), dt_ref, t_eval);
  const std::string path = cfg.output_dir + "/convergence.csv";
  write_convergence_report(rep, path);
  std::cout << "dt        err_u      ord   err_p      ord   err_eta    ord\n";
  for (size_t i = 0; i < rep.dt.size(); ++i) {
    auto ord = [&](const std::vector<double>& v) {
      return i == 0 ? std::string("  -  ") : std::to_string(v[i - 1]).substr(0, 5);
    };
    std::printf("%-9.3g %-10.4g %-5s %-10.4g %-5s %-10.4g %-5s\n", rep.dt[i], rep.err_u[i],
                ord(rep.ord_u).c_str(), rep.err_p[i], ord(rep.ord_p).c_str(), rep.err_eta[i],
                ord(rep.ord_eta).c_str());
  }
  std::cout << "report written to " << path << std::endl;
  return 0;
}

int do_bc_compare(const CommonOpts& o, const std::string& t_list) {
  SimulationConfig cfg = resolve_config(o);
  std::filesystem::create_directories(cfg.output_dir);
  BcComparison cmp = bc_comparison(cfg, parse_list(t_list));
  const std::string path = cfg.output_dir + "/bc_comparison.csv";
  write_bc_comparison(cmp, path);
  std::cout << "comparison written to " << path << std::endl;
  return 0;
}

int do_edr(const CommonOpts& o, const std::string& input) {
  ObservableSeries series;
  if (!input.empty()) {
    series = read_timeseries(input);
  } else {
    SimulationConfig cfg = resolve_config(o);
    series = run_with_observables(cfg).series;
  }
  const double edr = compute_edr(series.diameter, series.mean_pressure);
  std::cout << "EDR = " << edr << " %" << std::endl;
  return 0;
}

}  // namespace

int cli_main(const std::vector<std::string>& args) {
  CLI::App app{"2D fluid-structure interaction solver: incompressible flow in a channel\n"
               "bounded by a viscoelastic Koiter shell, advanced by the kinematically\n"
               "coupled beta-scheme."};
  app.require_subcommand(1);

  CommonOpts run_o, conv_o, bc_o, edr_o;
  std::string dt_list, t_list, edr_input;
  double dt_ref = 1e-6, t_eval = 0.01;

  CLI::App* run = app.add_subcommand("run", "run a simulation and write observables");
  add_common(run, run_o, true);

  CLI::App* conv = app.add_subcommand("converge", "time-convergence study against a reference");
  add_common(conv, conv_o, true);
  conv->add_option("--dt-list", dt_list, "comma-separated time steps")->required();
  conv->add_option("--dt-ref", dt_ref, "reference time step");
  conv->add_option("--t-eval", t_eval, "evaluation time (s)");

  CLI::App* bc = app.add_subcommand("bc-compare", "absorbing vs Dirichlet displacement profiles");
  add_common(bc, bc_o, true);
  bc->add_option("--t-eval", t_list, "comma-separated evaluation times")->required();

  CLI::App* edr = app.add_subcommand("edr", "energy dissipation ratio of a cycle");
  add_common(edr, edr_o, true);
  edr->add_option("--input", edr_input, "existing timeseries CSV (skips the run)");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints usage or --help output
    return (e.get_exit_code() == 0) ? 0 : 2;
  }

  try {
    if (run->parsed()) return do_run(run_o);
    if (conv->parsed()) return do_converge(conv_o, dt_list, dt_ref, t_eval);
    if (bc->parsed()) return do_bc_compare(bc_o, t_list);
    if (edr->parsed()) return do_edr(edr_o, edr_input);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
  return 2;
}

}  // namespace fsi
