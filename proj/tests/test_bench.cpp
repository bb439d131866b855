#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>

#include "fsi/bench.hpp"

using namespace fsi;

TEST_CASE("benchmark presets carry the published parameters") {
  SimulationConfig e1 = benchmark_config(BenchmarkId::example1);
  CHECK(e1.wall.R == 0.5);
  CHECK(e1.L == 6.0);
  CHECK(e1.fluid.rho_f == 1.0);
  CHECK(e1.fluid.mu == 0.035);
  CHECK(e1.wall.rho_s == 1.1);
  CHECK(e1.wall.h == 0.1);
  CHECK(e1.wall.E == 0.75e6);
  CHECK(e1.wall.sigma == 0.5);
  REQUIRE(e1.formaggia.has_value());
  CHECK(e1.formaggia->G == doctest::Approx(2.5e5));
  CHECK(e1.formaggia->k == 1.0);
  CHECK(e1.formaggia->gamma == 0.01);
  CHECK(e1.wall_bc == ShellBc::absorbing);
  CHECK_FALSE(e1.longitudinal);
  CHECK(e1.nz == 31);
  CHECK(e1.nr == 11);
  CHECK(e1.boundary.kind == BoundaryData::Kind::pulse);
  CHECK(e1.boundary.p_max == 2.0e4);
  CHECK(e1.boundary.t_max == 0.005);

  SimulationConfig e1b = benchmark_config(BenchmarkId::example1b);
  CHECK(e1b.longitudinal);
  CHECK(e1b.wall_bc == ShellBc::clamped);

  SimulationConfig e2 = benchmark_config(BenchmarkId::example2);
  CHECK(e2.wall.Cv == 30.0);
  CHECK(e2.wall.Dv == 15.0);
  CHECK(e2.nz == 61);
  CHECK(e2.nr == 21);
  CHECK_FALSE(e2.formaggia.has_value());
  const KoiterCoefficients c2 = e2.coefficients();
  CHECK(c2.D1 == doctest::Approx(0.01));  // D1 equals gamma of Example 1

  SimulationConfig cca = benchmark_config(BenchmarkId::cca);
  CHECK(cca.wall.R == 0.3);
  CHECK(cca.wall.h == 0.07);
  CHECK(cca.wall.E == 2.0e6);
  CHECK(cca.fluid.rho_f == 1.055);
  CHECK(cca.wall.rho_s == 1.055);
  CHECK(cca.fluid.mu == 0.04);
  CHECK(cca.wall.Cv == 3.0e4);
  CHECK(cca.wall.Dv == 1.5e4);
  REQUIRE(cca.C0_override.has_value());
  CHECK(cca.coefficients().C0 == doctest::Approx(1.7022e6));
  CHECK(cca.boundary.kind == BoundaryData::Kind::waveform);
  CHECK(cca.boundary.mean_drop ==
        doctest::Approx(0.0673 * cca.L * kDynPerMmHg).epsilon(1e-12));
}

TEST_CASE("flowrate quadrature against analytic integrals") {
  SimulationConfig cfg = benchmark_config(BenchmarkId::example1);
  Simulation sim(cfg);
  CoupledState s = sim.initial_state();
  const Mesh& mesh = sim.mesh();

  CHECK(flowrate(s.fluid, s.mesh, 3.0) == 0.0);

  const double U = 4.0, R = cfg.wall.R;
  for (int i = 0; i < mesh.n_fine(); ++i) s.fluid.u[2 * i] = U;
  CHECK(flowrate(s.fluid, s.mesh, 3.0) == doctest::Approx(U * R).epsilon(1e-13));

  for (int i = 0; i < mesh.n_fine(); ++i) {
    const double r = mesh.nodes[i].r;
    s.fluid.u[2 * i] = U * (1.0 - r * r / (R * R));
  }
  // composite trapezoid on a parabola: relative error dr^2/(4 R^2)
  const double dr = R / (mesh.nrf - 1);
  CHECK(flowrate(s.fluid, s.mesh, 3.0) ==
        doctest::Approx(2.0 / 3.0 * U * R).epsilon(dr * dr / (2 * R * R)));

  CHECK_THROWS_AS(flowrate(s.fluid, s.mesh, -1.0), ParameterError);
  CHECK_THROWS_AS(flowrate(s.fluid, s.mesh, 7.0), ParameterError);
}

TEST_CASE("mean pressure quadrature") {
  SimulationConfig cfg = benchmark_config(BenchmarkId::example1);
  Simulation sim(cfg);
  CoupledState s = sim.initial_state();
  CHECK(mean_pressure(s.fluid, s.mesh, 3.0) == 0.0);

  s.fluid.p.setConstant(123.5);
  CHECK(mean_pressure(s.fluid, s.mesh, 3.0) == doctest::Approx(123.5).epsilon(1e-13));

  // linear in r: mean of a + b r over (0, R) is a + b R / 2, trapezoid exact
  const Mesh& mesh = sim.mesh();
  for (int I = 0; I < mesh.n_coarse(); ++I) {
    const double r = mesh.nodes[mesh.coarse_to_fine[I]].r;
    s.fluid.p[I] = 10.0 + 6.0 * r;
  }
  CHECK(mean_pressure(s.fluid, s.mesh, 3.0) ==
        doctest::Approx(10.0 + 3.0 * cfg.wall.R).epsilon(1e-12));
}

TEST_CASE("EDR: retraced curve, analytic ellipse, affine invariance") {
  // single-valued retraced curve
  std::vector<double> d, p;
  for (int k = 0; k <= 50; ++k) {
    const double x = k / 50.0;
    d.push_back(1.0 + 0.2 * x);
    p.push_back(50.0 * x * x);
  }
  for (int k = 49; k >= 0; --k) {
    d.push_back(d[k]);
    p.push_back(p[k]);
  }
  CHECK(compute_edr(d, p) == doctest::Approx(0.0).epsilon(1e-8));

  // axis-aligned ellipse: A1 = pi a b, A2 = (2 - pi/2) a b
  const double a = 0.05, b = 900.0, d0 = 0.62, p0 = 2000.0;
  d.clear();
  p.clear();
  const int n = 3000;
  for (int k = 0; k < n; ++k) {
    const double th = 2.0 * M_PI * k / n;
    d.push_back(d0 + a * std::cos(th));
    p.push_back(p0 + b * std::sin(th));
  }
  d.push_back(d.front());
  p.push_back(p.front());
  const double expected = 100.0 * M_PI / (M_PI + 2.0 - M_PI / 2.0);
  CHECK(compute_edr(d, p) == doctest::Approx(expected).epsilon(0.005));

  // affine pressure rescaling leaves the ratio unchanged
  std::vector<double> p2(p);
  for (double& v : p2) v = 3.7 * v + 1234.5;
  CHECK(compute_edr(d, p2) == doctest::Approx(compute_edr(d, p)).epsilon(1e-9));

  // open loop rejected
  std::vector<double> dopen(d), popen(p);
  dopen.back() = dopen.front() + 10.0 * a;
  CHECK_THROWS_AS(compute_edr(dopen, popen), DataError);
}

TEST_CASE("convergence study: a dt equal to the reference has zero error") {
  SimulationConfig cfg = benchmark_config(BenchmarkId::example1b);
  cfg.nz = 9;
  cfg.nr = 4;
  const ConvergenceReport r = convergence_study(cfg, {4e-4, 2e-4}, 2e-4, 2e-3);
  CHECK(r.err_u.back() == 0.0);
  CHECK(r.err_p.back() == 0.0);
  CHECK(r.err_eta.back() == 0.0);
  CHECK(r.err_u.front() > 0.0);

  CHECK_THROWS_AS(convergence_study(cfg, {4e-4, 2e-4}, 3e-4, 2e-3), ParameterError);
  CHECK_THROWS_AS(convergence_study(cfg, {3.3e-4}, 1e-4, 1e-3), ParameterError);
}

TEST_CASE("waveform file: loads, wraps periodically, validates") {
  const BoundaryData b = load_waveform(default_cca_waveform_path(), 1.0, 100.0);
  CHECK(b.sample_t.size() >= 50);
  CHECK(b.p_in(0.0) == doctest::Approx(b.waveform_value(0.0) + 100.0));
  CHECK(b.p_out(0.3) == doctest::Approx(b.waveform_value(0.3)));
  CHECK(b.waveform_value(2.4) == doctest::Approx(b.waveform_value(0.4)).epsilon(1e-12));
  // periodic extension continuous across the wrap
  CHECK(std::abs(b.waveform_value(1.0 - 1e-9) - b.waveform_value(1e-9)) < 1.0);

  const char* path = "/tmp/fsi_bad_waveform.csv";
  {
    std::ofstream f(path);
    f << "0.0,1.0\n0.5,2.0\n0.4,3.0\n";
  }
  CHECK_THROWS_AS(load_waveform(path, 1.0, 0.0), DataError);
  std::remove(path);
  CHECK_THROWS_AS(load_waveform("/nonexistent/wave.csv", 1.0, 0.0), IoError);
}

TEST_CASE("example 1b: degenerate longitudinal equation stays finite early on") {
  // The degenerate model has no longitudinal stiffness; the axial pressure
  // load near the clamped ends grows eta_z ballistically later in the run
  // (see the acceptance suite). Here: the early transient is sane.
  SimulationConfig cfg = benchmark_config(BenchmarkId::example1b);
  cfg.t_final = 3e-3;
  double max_ez = 0.0, max_er = 0.0;
  run_simulation(cfg, [&](int, const CoupledState& s) {
    max_ez = std::max(max_ez, s.shell.eta_z.cwiseAbs().maxCoeff());
    max_er = std::max(max_er, s.shell.eta_r.cwiseAbs().maxCoeff());
  });
  CHECK(max_er > 1e-4);
  CHECK(max_er < 0.2);
  CHECK(max_ez > 0.0);
  CHECK(std::isfinite(max_ez));
}

TEST_CASE("bc comparison is deterministic and spans both BC kinds") {
  SimulationConfig cfg = benchmark_config(BenchmarkId::example1);
  cfg.nz = 11;
  cfg.nr = 5;
  const std::vector<double> times = {5e-4, 1e-3};
  const BcComparison a = bc_comparison(cfg, times);
  const BcComparison b = bc_comparison(cfg, times);
  REQUIRE(a.eta_r_absorbing.size() == 2);
  REQUIRE(a.eta_r_dirichlet.size() == 2);
  for (size_t k = 0; k < times.size(); ++k) {
    REQUIRE(a.eta_r_absorbing[k].size() == static_cast<int>(a.z.size()));
    CHECK((a.eta_r_absorbing[k] - b.eta_r_absorbing[k]).norm() == 0.0);
    CHECK((a.eta_r_dirichlet[k] - b.eta_r_dirichlet[k]).norm() == 0.0);
  }
  // Dirichlet pins the wall ends (up to direct-solver roundoff).
  CHECK(std::abs(a.eta_r_dirichlet[1][0]) < 1e-12);
}

TEST_CASE("example 2 mesh-refinement sanity" * doctest::may_fail()) {
  // Coarse (61x21) vs fine (121x41) displacement profiles at t = 8 ms.
  SimulationConfig coarse = benchmark_config(BenchmarkId::example2);
  coarse.t_final = 8e-3;
  SimulationConfig fine = coarse;
  fine.nz = 121;
  fine.nr = 41;
  const CoupledState sc = run_simulation(coarse).final_state;
  const CoupledState sf = run_simulation(fine).final_state;
  const int nc = static_cast<int>(sc.shell.eta_r.size());
  double num = 0.0, den = 0.0;
  for (int k = 0; k < nc; ++k) {
    const double rc = sc.shell.eta_r[k], rf = sf.shell.eta_r[2 * k];
    const double zc = sc.shell.eta_z[k], zf = sf.shell.eta_z[2 * k];
    num += (rc - rf) * (rc - rf) + (zc - zf) * (zc - zf);
    den += rf * rf + zf * zf;
  }
  REQUIRE(den > 0.0);
  CHECK(std::sqrt(num / den) < 0.15);
}
