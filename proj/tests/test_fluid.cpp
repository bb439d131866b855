#include <doctest.h>

#include <cmath>
#include <random>

#include "fsi/fluid.hpp"

using namespace fsi;

namespace {

ShellOperators rigid_ops(const Mesh& mesh, double rho_s_h_scale = 1.0) {
  WallParams w{0.75e6, 0.5, 0.0, 0.0, 1.1, 0.1, mesh.R};
  KoiterCoefficients c = formaggia_coefficients(FormaggiaParams{1.0, 2.5e5, 0.01}, w);
  return assemble_shell_operators(c, WallGrid{mesh.wall_z()}, ShellBc::clamped,
                                  1.1 * 0.1 * rho_s_h_scale);
}

InterfaceGeometry flat_geom(const Mesh& mesh) {
  const int n = static_cast<int>(mesh.interface_nodes.size());
  return interface_geometry(Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n),
                            WallGrid{mesh.wall_z()});
}

}  // namespace

TEST_CASE("inlet pressure pulse formula") {
  CHECK(inlet_pressure_pulse(0.0, 2e4, 0.005) == doctest::Approx(0.0));
  CHECK(inlet_pressure_pulse(0.0025, 2e4, 0.005) == doctest::Approx(2e4));
  CHECK(inlet_pressure_pulse(0.006, 2e4, 0.005) == 0.0);
  CHECK_THROWS_AS(inlet_pressure_pulse(-1e-3, 2e4, 0.005), ParameterError);
}

TEST_CASE("boundary data: waveform validation and periodic interpolation") {
  BoundaryData b;
  b.kind = BoundaryData::Kind::waveform;
  b.period = 1.0;
  b.sample_t = {0.0, 0.25, 0.5, 0.75};
  b.sample_p = {0.0, 100.0, 50.0, 25.0};
  b.validate();
  CHECK(b.waveform_value(0.125) == doctest::Approx(50.0));
  CHECK(b.waveform_value(0.875) == doctest::Approx(12.5));  // wraps to p(1) = p(0)
  CHECK(b.waveform_value(1.25) == doctest::Approx(100.0));  // periodic
  CHECK(b.waveform_value(-0.75) == doctest::Approx(100.0));

  b.sample_t = {0.0, 0.5, 0.5};
  b.sample_p = {0.0, 1.0, 2.0};
  CHECK_THROWS_AS(b.validate(), DataError);
}

TEST_CASE("step1: zero data keeps the rest state, beta irrelevant without pressure") {
  const Mesh mesh = build_mesh(9, 5, 3.0, 0.5);
  const ShellOperators ops = rigid_ops(mesh);
  StokesSolver solver(mesh, ops, FluidParams{1.0, 0.035});
  const FluidState rest = FluidState::rest(mesh);
  const Eigen::VectorXd p0 = Eigen::VectorXd::Zero(ops.grid.n());
  const InterfaceGeometry geom = flat_geom(mesh);

  FluidState out = solver.solve(rest, mesh.nodes, geom, p0, 0.0, 0.0, 1.0, 1e-4);
  CHECK(out.u.lpNorm<Eigen::Infinity>() < 1e-14);
  CHECK(out.p.lpNorm<Eigen::Infinity>() < 1e-12);

  StokesSolver s0(mesh, ops, FluidParams{1.0, 0.035});
  StokesSolver s1(mesh, ops, FluidParams{1.0, 0.035});
  const FluidState a = s0.solve(rest, mesh.nodes, geom, p0, 250.0, 0.0, 0.0, 1e-4);
  const FluidState b = s1.solve(rest, mesh.nodes, geom, p0, 250.0, 0.0, 1.0, 1e-4);
  CHECK((a.u - b.u).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK((a.p - b.p).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("step1: discrete divergence residual at solver accuracy") {
  const Mesh mesh = build_mesh(15, 7, 4.0, 0.5);
  const ShellOperators ops = rigid_ops(mesh);
  StokesSolver solver(mesh, ops, FluidParams{1.0, 0.035});
  FluidState s = FluidState::rest(mesh);
  const Eigen::VectorXd p0 = Eigen::VectorXd::Zero(ops.grid.n());
  const InterfaceGeometry geom = flat_geom(mesh);
  for (int k = 0; k < 3; ++k) s = solver.solve(s, mesh.nodes, geom, p0, 4.0e3, 0.0, 1.0, 1e-4);
  const double umax = s.u.lpNorm<Eigen::Infinity>();
  REQUIRE(umax > 1.0);
  CHECK(solver.divergence_residual(s.u, mesh.nodes) <= 1e-8 * umax);
}

TEST_CASE("step1: saddle-point factorization succeeds on constructed meshes") {
  for (auto [nz, nr] : {std::pair{5, 4}, {9, 5}, {31, 11}}) {
    const Mesh mesh = build_mesh(nz, nr, 6.0, 0.5);
    const ShellOperators ops = rigid_ops(mesh);
    StokesSolver solver(mesh, ops, FluidParams{1.0, 0.035});
    const FluidState out =
        solver.solve(FluidState::rest(mesh), mesh.nodes, flat_geom(mesh),
                     Eigen::VectorXd::Zero(ops.grid.n()), 1.0e3, 0.0, 1.0, 1e-4);
    CHECK(std::isfinite(out.u.sum()));
    CHECK(std::isfinite(out.p.sum()));
  }
}

TEST_CASE("step1: mirror-symmetric data produce mirror-symmetric fields") {
  const Mesh mesh = build_mesh(9, 5, 3.0, 0.5);  // odd nz: mesh is z-mirror symmetric
  const ShellOperators ops = rigid_ops(mesh);
  StokesSolver solver(mesh, ops, FluidParams{1.0, 0.035});
  const FluidState out =
      solver.solve(FluidState::rest(mesh), mesh.nodes, flat_geom(mesh),
                   Eigen::VectorXd::Zero(ops.grid.n()), 800.0, 800.0, 1.0, 1e-4);
  const double uscale = out.u.lpNorm<Eigen::Infinity>() + 1e-30;
  const double pscale = out.p.lpNorm<Eigen::Infinity>();
  REQUIRE(pscale > 100.0);
  for (int j = 0; j < mesh.nrf; ++j)
    for (int i = 0; i < mesh.nzf; ++i) {
      const int a = mesh.fine_id(i, j), b = mesh.fine_id(mesh.nzf - 1 - i, j);
      CHECK(std::abs(out.u[2 * a] + out.u[2 * b]) < 1e-9 * uscale);      // u_z odd
      CHECK(std::abs(out.u[2 * a + 1] - out.u[2 * b + 1]) < 1e-9 * uscale);  // u_r even
    }
  for (int J = 0; J < mesh.nrc; ++J)
    for (int I = 0; I < mesh.nzc; ++I) {
      const int a = J * mesh.nzc + I, b = J * mesh.nzc + (mesh.nzc - 1 - I);
      CHECK(std::abs(out.p[a] - out.p[b]) < 1e-9 * pscale);
    }
}

TEST_CASE("step1: near-rigid wall reaches the plane Poiseuille profile") {
  // Constant pressure drop, wall inertia scaled 1e6; run to steady state and
  // compare the mid-channel axial profile against dp (R^2 - r^2) / (2 mu L).
  const double L = 4.0, R = 0.5, mu = 1.0, dp = 320.0;
  const Mesh mesh = build_mesh(17, 8, L, R);
  const ShellOperators ops = rigid_ops(mesh, 1e6);
  StokesSolver solver(mesh, ops, FluidParams{1.0, mu});
  const InterfaceGeometry geom = flat_geom(mesh);
  const Eigen::VectorXd p0 = Eigen::VectorXd::Zero(ops.grid.n());
  FluidState s = FluidState::rest(mesh);
  for (int k = 0; k < 220; ++k) s = solver.solve(s, mesh.nodes, geom, p0, dp, 0.0, 1.0, 0.0125);
  const double umax = dp * R * R / (2.0 * mu * L);
  const int mid = (mesh.nzf - 1) / 2;
  for (int j = 0; j < mesh.nrf; ++j) {
    const double r = mesh.nodes[mesh.fine_id(mid, j)].r;
    const double exact = dp * (R * R - r * r) / (2.0 * mu * L);
    CHECK(std::abs(s.u[2 * mesh.fine_id(mid, j)] - exact) < 0.02 * umax);
    CHECK(std::abs(s.u[2 * mesh.fine_id(mid, j) + 1]) < 0.02 * umax);
  }
}

TEST_CASE("step2: zero relative velocity and constant fields are preserved") {
  const Mesh mesh = build_mesh(9, 5, 3.0, 0.5);
  const int N = mesh.n_fine();
  std::mt19937 rng(3);
  std::normal_distribution<double> nd(0.0, 1.0);
  FluidState s = FluidState::rest(mesh);
  for (int i = 0; i < 2 * N; ++i) s.u[i] = nd(rng);

  // w = u pointwise: nothing moves
  Eigen::VectorXd wz(N), wr(N);
  for (int i = 0; i < N; ++i) {
    wz[i] = s.u[2 * i];
    wr[i] = s.u[2 * i + 1];
  }
  FluidState out = step2_advect(s, wz, wr, mesh, mesh.nodes, 1e-2);
  CHECK((out.u - s.u).lpNorm<Eigen::Infinity>() < 1e-13);

  // spatially constant u, arbitrary w
  FluidState c = FluidState::rest(mesh);
  for (int i = 0; i < N; ++i) {
    c.u[2 * i] = 1.7;
    c.u[2 * i + 1] = -0.4;
  }
  for (int i = 0; i < N; ++i) {
    wz[i] = nd(rng);
    wr[i] = nd(rng);
  }
  out = step2_advect(c, wz, wr, mesh, mesh.nodes, 1e-2);
  for (int i = 0; i < N; ++i) {
    CHECK(out.u[2 * i] == doctest::Approx(1.7).epsilon(1e-13));
    CHECK(out.u[2 * i + 1] == doctest::Approx(-0.4).epsilon(1e-13));
  }
}

TEST_CASE("step2: linear field against the characteristic trace-back oracle") {
  const Mesh mesh = build_mesh(13, 5, 3.0, 0.5);
  const int N = mesh.n_fine();
  const double a = 2.0, cadv = 5.0, dt = 1e-2;  // foot displacement 0.05 cm
  Eigen::VectorXd field(2 * N), adv(2 * N);
  for (int i = 0; i < N; ++i) {
    field[2 * i] = a * mesh.nodes[i].z;
    field[2 * i + 1] = 0.0;
    adv[2 * i] = cadv;
    adv[2 * i + 1] = 0.0;
  }
  const std::vector<char> frozen(N, 0);
  const Eigen::VectorXd out = advect_characteristics(mesh, mesh.nodes, field, adv, dt, frozen);
  for (int i = 0; i < N; ++i) {
    const double z = mesh.nodes[i].z;
    if (z - cadv * dt < 0.0) continue;  // foot left through the inlet
    CHECK(out[2 * i] == doctest::Approx(a * (z - cadv * dt)).epsilon(1e-12));
  }
}

TEST_CASE("step2: discrete maximum principle for updated nodes") {
  const Mesh mesh = build_mesh(11, 6, 3.0, 0.5);
  const int N = mesh.n_fine();
  std::mt19937 rng(17);
  std::normal_distribution<double> nd(0.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    FluidState s = FluidState::rest(mesh);
    Eigen::VectorXd wz(N), wr(N);
    for (int i = 0; i < N; ++i) {
      s.u[2 * i] = nd(rng) + 2.0 * std::sin(mesh.nodes[i].z);
      s.u[2 * i + 1] = nd(rng);
      wz[i] = 0.5 * nd(rng);
      wr[i] = 0.5 * nd(rng);
    }
    double lo[2] = {s.u[0], s.u[1]}, hi[2] = {s.u[0], s.u[1]};
    for (int i = 0; i < N; ++i)
      for (int c = 0; c < 2; ++c) {
        lo[c] = std::min(lo[c], s.u[2 * i + c]);
        hi[c] = std::max(hi[c], s.u[2 * i + c]);
      }
    const FluidState out = step2_advect(s, wz, wr, mesh, mesh.nodes, 5e-2);
    for (int i = 0; i < N; ++i)
      for (int c = 0; c < 2; ++c) {
        CHECK(out.u[2 * i + c] >= lo[c] - 1e-12);
        CHECK(out.u[2 * i + c] <= hi[c] + 1e-12);
      }
  }
}

TEST_CASE("step2: sub-step cap raises a step error") {
  const Mesh mesh = build_mesh(5, 4, 2.0, 1.0);
  const int N = mesh.n_fine();
  Eigen::VectorXd field = Eigen::VectorXd::Zero(2 * N);
  Eigen::VectorXd adv = Eigen::VectorXd::Constant(2 * N, 1e4);
  const std::vector<char> frozen(N, 0);
  CHECK_THROWS_AS(advect_characteristics(mesh, mesh.nodes, field, adv, 1.0, frozen, 10),
                  StepError);
}
