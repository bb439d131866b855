#include "fsi/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

namespace fsi {

std::string default_cca_waveform_path() {
#ifdef FSI_DATA_DIR
  return std::string(FSI_DATA_DIR) + "/cca_waveform.csv";
#else
  return "data/cca_waveform.csv";
#endif
}

BoundaryData load_waveform(const std::string& path, double period, double mean_drop) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open waveform file: " + path);
  BoundaryData b;
  b.kind = BoundaryData::Kind::waveform;
  b.period = period;
  b.mean_drop = mean_drop;
  b.waveform_path = path;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r,") == std::string::npos) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double t, p;
    if (!(ls >> t >> p)) throw DataError("waveform: malformed line in " + path);
    b.sample_t.push_back(t);
    b.sample_p.push_back(p);
  }
  b.validate();
  return b;
}

void ObservableSeries::validate() const {
  const size_t n = t.size();
  if (diameter.size() != n || flowrate.size() != n || mean_pressure.size() != n ||
      eta_z_mid.size() != n || eta_r_mid.size() != n)
    throw DataError("observable series: column lengths differ");
  for (size_t i = 1; i < n; ++i)
    if (!(t[i] > t[i - 1])) throw DataError("observable series: time samples not increasing");
}

int thread_cap() {
  if (const char* env = std::getenv("FSI_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

SimulationConfig benchmark_config(BenchmarkId id) {
  SimulationConfig c;
  c.benchmark = id;
  switch (id) {
    case BenchmarkId::example1:
    case BenchmarkId::example1b:
    case BenchmarkId::example2: {
      c.L = 6.0;
      c.wall = WallParams{0.75e6, 0.5, 0.0, 0.0, 1.1, 0.1, 0.5};
      c.fluid = FluidParams{1.0, 0.035};
      c.boundary = BoundaryData::pulse(2.0e4, 0.005);
      c.dt = 1e-4;
      c.t_final = 0.012;
      c.beta = 1.0;
      if (id == BenchmarkId::example2) {
        // Structural viscosities chosen so D1 equals gamma of Example 1.
        c.wall.Cv = 30.0;
        c.wall.Dv = 15.0;
        c.nz = 61;
        c.nr = 21;
        c.wall_bc = ShellBc::clamped;
        c.longitudinal = true;
      } else {
        c.formaggia = FormaggiaParams{1.0, shear_modulus(c.wall.E, c.wall.sigma), 0.01};
        c.nz = 31;
        c.nr = 11;
        if (id == BenchmarkId::example1) {
          c.wall_bc = ShellBc::absorbing;
          c.longitudinal = false;
        } else {
          c.wall_bc = ShellBc::clamped;
          c.longitudinal = true;
        }
      }
      break;
    }
    case BenchmarkId::cca: {
      c.L = 4.0;
      c.wall = WallParams{2.0e6, 0.5, 3.0e4, 1.5e4, 1.055, 0.07, 0.3};
      // The published coefficient table lists C0 = 1.7022e6; the closed-form
      // value differs, so the benchmark pins the table value explicitly.
      c.C0_override = 1.7022e6;
      c.fluid = FluidParams{1.055, 0.04};
      c.nz = 21;
      c.nr = 7;
      c.wall_bc = ShellBc::clamped;
      c.longitudinal = true;
      c.dt = 1e-4;
      c.t_final = 1.0;
      c.beta = 1.0;
      // Digitized approximation of the carotid pressure waveform; the mean
      // inlet-outlet drop is 0.0673 mmHg/cm over the segment length.
      c.boundary =
          load_waveform(default_cca_waveform_path(), 1.0, 0.0673 * c.L * kDynPerMmHg);
      break;
    }
  }
  return c;
}

namespace {

int nearest_column(const Mesh& mesh, double z) {
  if (z < 0.0 || z > mesh.L) throw ParameterError("cross-section lies outside the domain");
  const double hz = mesh.L / (mesh.nzf - 1);
  return std::clamp(static_cast<int>(std::lround(z / hz)), 0, mesh.nzf - 1);
}

}  // namespace

double flowrate(const FluidState& state, const MovingMesh& mesh, double z_section) {
  const Mesh& m = *mesh.ref;
  const int i = nearest_column(m, z_section);
  double q = 0.0;
  for (int j = 0; j + 1 < m.nrf; ++j) {
    const int a = m.fine_id(i, j), b = m.fine_id(i, j + 1);
    q += 0.5 * (state.u[2 * a] + state.u[2 * b]) * (mesh.pos[b].r - mesh.pos[a].r);
  }
  return q;
}

double mean_pressure(const FluidState& state, const MovingMesh& mesh, double z_section) {
  const Mesh& m = *mesh.ref;
  const int i = nearest_column(m, z_section);
  const Eigen::VectorXd pf = m.prolong * state.p;
  double ip = 0.0;
  for (int j = 0; j + 1 < m.nrf; ++j) {
    const int a = m.fine_id(i, j), b = m.fine_id(i, j + 1);
    ip += 0.5 * (pf[a] + pf[b]) * (mesh.pos[b].r - mesh.pos[a].r);
  }
  const double height =
      mesh.pos[m.fine_id(i, m.nrf - 1)].r - mesh.pos[m.fine_id(i, 0)].r;
  return ip / height;
}

RunWithSeries run_with_observables(const SimulationConfig& cfg, const StepHook& hook) {
  RunWithSeries out;
  const double zmid = 0.5 * cfg.L;
  const int mid_wall = (2 * cfg.nz - 2) / 2;
  auto record = [&](int step, const CoupledState& s) {
    out.series.t.push_back(s.t);
    out.series.diameter.push_back(2.0 * (cfg.wall.R + s.shell.eta_r[mid_wall]));
    out.series.flowrate.push_back(flowrate(s.fluid, s.mesh, zmid));
    out.series.mean_pressure.push_back(mean_pressure(s.fluid, s.mesh, zmid));
    out.series.eta_z_mid.push_back(s.shell.eta_z[mid_wall]);
    out.series.eta_r_mid.push_back(s.shell.eta_r[mid_wall]);
    if (hook) hook(step, s);
  };
  RunResult r = run_simulation(cfg, record);
  out.final_state = std::move(r.final_state);
  return out;
}

ConvergenceReport convergence_study(const SimulationConfig& cfg, std::vector<double> dt_list,
                                    double dt_ref, double t_eval) {
  std::sort(dt_list.begin(), dt_list.end(), std::greater<double>());
  if (dt_list.empty()) throw ParameterError("convergence_study: empty dt list");
  if (!(dt_ref < dt_list.back() || dt_ref == dt_list.back()))
    throw ParameterError("convergence_study: dt_ref must not exceed the smallest dt");
  for (double dt : dt_list) {
    const double k = t_eval / dt;
    if (std::abs(k - std::lround(k)) > 1e-6)
      throw ParameterError("convergence_study: t_eval is not a multiple of dt");
  }

  std::vector<double> all_dt = dt_list;
  all_dt.push_back(dt_ref);
  std::vector<CoupledState> states(all_dt.size());
  std::vector<std::string> failures(all_dt.size());

  const int cap = std::max(1, thread_cap());
  for (size_t base = 0; base < all_dt.size(); base += cap) {
    std::vector<std::thread> pool;
    for (size_t i = base; i < std::min(all_dt.size(), base + cap); ++i) {
      pool.emplace_back([&, i]() {
        try {
          SimulationConfig c = cfg;
          c.dt = all_dt[i];
          c.t_final = t_eval;
          states[i] = run_simulation(c).final_state;
        } catch (const std::exception& e) {
          failures[i] = e.what();
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  for (size_t i = 0; i < all_dt.size(); ++i)
    if (!failures[i].empty())
      throw StepError("convergence_study: run with dt=" + std::to_string(all_dt[i]) +
                      " failed: " + failures[i]);

  // L2 norms through the reference-mesh mass matrices.
  const Mesh mesh = build_mesh(cfg.nz, cfg.nr, cfg.L, cfg.wall.R);
  const SpMat M = assemble_mass(mesh, mesh.nodes);
  WallGrid grid{mesh.wall_z()};
  SpMat M1;
  {
    ShellOperators tmp = assemble_shell_operators(KoiterCoefficients{}, grid, ShellBc::clamped,
                                                  1.0, false);
    M1 = tmp.M1;
  }
  const CoupledState& ref = states.back();

  auto split = [&](const Eigen::VectorXd& u, Eigen::VectorXd& z, Eigen::VectorXd& r) {
    const int N = mesh.n_fine();
    z.resize(N);
    r.resize(N);
    for (int i = 0; i < N; ++i) {
      z[i] = u[2 * i];
      r[i] = u[2 * i + 1];
    }
  };

  ConvergenceReport rep;
  rep.dt = dt_list;
  for (size_t i = 0; i < dt_list.size(); ++i) {
    const CoupledState& s = states[i];
    Eigen::VectorXd duz, dur;
    split(s.fluid.u - ref.fluid.u, duz, dur);
    rep.err_u.push_back(std::sqrt(duz.dot(M * duz) + dur.dot(M * dur)));
    const Eigen::VectorXd dp = mesh.prolong * (s.fluid.p - ref.fluid.p);
    rep.err_p.push_back(std::sqrt(dp.dot(M * dp)));
    const Eigen::VectorXd dez = s.shell.eta_z - ref.shell.eta_z;
    const Eigen::VectorXd der = s.shell.eta_r - ref.shell.eta_r;
    rep.err_eta.push_back(std::sqrt(dez.dot(M1 * dez) + der.dot(M1 * der)));
  }
  auto orders = [&](const std::vector<double>& e) {
    std::vector<double> o;
    for (size_t i = 0; i + 1 < e.size(); ++i)
      o.push_back(std::log(e[i] / e[i + 1]) / std::log(dt_list[i] / dt_list[i + 1]));
    return o;
  };
  rep.ord_u = orders(rep.err_u);
  rep.ord_p = orders(rep.err_p);
  rep.ord_eta = orders(rep.err_eta);
  return rep;
}

double compute_edr(const std::vector<double>& diameter, const std::vector<double>& pressure,
                   double closure_tol) {
  const size_t n = diameter.size();
  if (n < 4 || pressure.size() != n) throw DataError("edr: need a loop of matching samples");
  const auto [dmin_it, dmax_it] = std::minmax_element(diameter.begin(), diameter.end());
  const auto [pmin_it, pmax_it] = std::minmax_element(pressure.begin(), pressure.end());
  const double drange = *dmax_it - *dmin_it, prange = *pmax_it - *pmin_it;
  if (!(drange > 0.0) || !(prange > 0.0)) throw DataError("edr: degenerate loop");
  if (std::abs(diameter.front() - diameter.back()) > closure_tol * drange ||
      std::abs(pressure.front() - pressure.back()) > closure_tol * prange)
    throw DataError("edr: loop is not closed within tolerance");

  // Close the polygon explicitly.
  std::vector<double> d(diameter), p(pressure);
  d.push_back(d.front());
  p.push_back(p.front());

  double a1 = 0.0;
  for (size_t i = 0; i + 1 < d.size(); ++i) a1 += d[i] * p[i + 1] - d[i + 1] * p[i];
  a1 = 0.5 * std::abs(a1);

  // Lower envelope sampled on a fine abscissa grid.
  const double pmin = *pmin_it;
  const int ns = 2000;
  double a2 = 0.0;
  double prev = 0.0;
  for (int k = 0; k <= ns; ++k) {
    const double x = *dmin_it + drange * k / ns;
    double lo = std::numeric_limits<double>::max();
    for (size_t i = 0; i + 1 < d.size(); ++i) {
      const double x0 = d[i], x1 = d[i + 1];
      if ((x0 - x) * (x1 - x) > 0.0) continue;
      if (x0 == x1) {
        lo = std::min(lo, std::min(p[i], p[i + 1]));
      } else {
        const double w = (x - x0) / (x1 - x0);
        lo = std::min(lo, (1.0 - w) * p[i] + w * p[i + 1]);
      }
    }
    const double val = (lo == std::numeric_limits<double>::max()) ? pmin : lo - pmin;
    if (k > 0) a2 += 0.5 * (prev + val) * (drange / ns);
    prev = val;
  }
  return 100.0 * a1 / (a1 + a2);
}

BcComparison bc_comparison(const SimulationConfig& cfg, const std::vector<double>& t_eval) {
  BcComparison out;
  out.times = t_eval;
  double t_max = 0.0;
  for (double t : t_eval) t_max = std::max(t_max, t);

  auto run_kind = [&](ShellBc bc, std::vector<Eigen::VectorXd>& dst) {
    SimulationConfig c = cfg;
    c.wall_bc = bc;
    c.t_final = t_max;
    dst.assign(t_eval.size(), Eigen::VectorXd());
    run_simulation(c, [&](int, const CoupledState& s) {
      for (size_t k = 0; k < t_eval.size(); ++k)
        if (std::abs(s.t - t_eval[k]) < 0.5 * c.dt) dst[k] = s.shell.eta_r;
    });
  };
  run_kind(ShellBc::absorbing, out.eta_r_absorbing);
  run_kind(ShellBc::clamped, out.eta_r_dirichlet);

  const Mesh mesh = build_mesh(cfg.nz, cfg.nr, cfg.L, cfg.wall.R);
  out.z = mesh.wall_z();
  return out;
}

}  // namespace fsi
