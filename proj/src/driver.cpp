#include "fsi/driver.hpp"

#include <cmath>

namespace fsi {

const char* to_string(BenchmarkId id) {
  switch (id) {
    case BenchmarkId::example1: return "example1";
    case BenchmarkId::example1b: return "example1b";
    case BenchmarkId::example2: return "example2";
    case BenchmarkId::cca: return "cca";
  }
  return "?";
}

BenchmarkId benchmark_from_string(const std::string& s) {
  if (s == "example1") return BenchmarkId::example1;
  if (s == "example1b") return BenchmarkId::example1b;
  if (s == "example2") return BenchmarkId::example2;
  if (s == "cca") return BenchmarkId::cca;
  throw ConfigError("unknown benchmark id: " + s);
}

void SimulationConfig::validate() const {
  wall.validate();
  fluid.validate();
  boundary.validate();
  if (!(L > 0.0)) throw ConfigError("geometry.L must be positive");
  if (!(dt > 0.0)) throw ConfigError("scheme.dt must be positive");
  if (!(t_final >= 0.0)) throw ConfigError("scheme.t_final must be >= 0");
  if (t_final > 0.0 && t_final < dt) throw ConfigError("scheme.t_final must be >= scheme.dt");
  if (!(beta >= 0.0 && beta <= 1.0)) throw ConfigError("scheme.beta must lie in [0,1]");
  if (nz < 2 || nr < 2) throw ConfigError("geometry.nz/nr must be at least 2");
  if (snapshot_every < 0) throw ConfigError("output.snapshot_every must be >= 0");
}

KoiterCoefficients SimulationConfig::coefficients() const {
  KoiterCoefficients c =
      formaggia ? formaggia_coefficients(*formaggia, wall) : koiter_coefficients(wall);
  if (C0_override) c.C0 = *C0_override;
  return c;
}

namespace {

WallGrid wall_grid_of(const Mesh& mesh) { return WallGrid{mesh.wall_z()}; }

SimulationConfig validated(SimulationConfig cfg) {
  cfg.validate();
  return cfg;
}

}  // namespace

Simulation::Simulation(SimulationConfig cfg)
    : cfg_(validated(std::move(cfg))),
      mesh_(std::make_shared<const Mesh>(build_mesh(cfg_.nz, cfg_.nr, cfg_.L, cfg_.wall.R))),
      coeffs_(cfg_.coefficients()),
      ops_(assemble_shell_operators(coeffs_, wall_grid_of(*mesh_), cfg_.wall_bc,
                                    cfg_.wall.rho_s * cfg_.wall.h, !cfg_.longitudinal)),
      ext_(*mesh_),
      stokes_(*mesh_, ops_, cfg_.fluid) {}

CoupledState Simulation::initial_state() const {
  CoupledState s;
  s.fluid = FluidState::rest(*mesh_);
  s.shell = ShellState::rest(ops_.grid.n());
  s.mesh = MovingMesh::reference(mesh_);
  s.t = 0.0;
  s.p_trace = Eigen::VectorXd::Zero(ops_.grid.n());
  return s;
}

void Simulation::apply_displacement(CoupledState& s) const {
  // The mesh follows the Eulerian wall shape r = g(z): interface nodes move
  // vertically by eta_r while eta_z stays a material (shell) field. This is
  // the boundary map the harmonic extension lifts into the domain.
  const Eigen::VectorXd dr = ext_.extend_interface(s.shell.eta_r);
  s.mesh.disp_z.setZero();
  s.mesh.disp_r = dr;
  s.mesh.w_z.setZero();
  s.mesh.w_r.setZero();
  for (int i = 0; i < mesh_->n_fine(); ++i)
    s.mesh.pos[i] = {mesh_->nodes[i].z, mesh_->nodes[i].r + dr[i]};
  if (s.mesh.min_signed_area() <= 0.0)
    throw MeshError("initial displacement tangles the mesh");
}

Eigen::VectorXd Simulation::interface_pressure_trace(const Eigen::VectorXd& p_coarse) const {
  const Eigen::VectorXd pf = mesh_->prolong * p_coarse;
  const auto& iface = mesh_->interface_nodes;
  Eigen::VectorXd tr(iface.size());
  for (size_t k = 0; k < iface.size(); ++k) tr[k] = pf[iface[k]];
  return tr;
}

void Simulation::advance(CoupledState& s) {
  const double dt = cfg_.dt;
  const double t_new = s.t + dt;
  const auto& iface = mesh_->interface_nodes;
  const int n = static_cast<int>(iface.size());

  // Geometry frozen at t^n for all three sub-steps.
  const InterfaceGeometry geom = interface_geometry(s.shell.eta_z, s.shell.eta_r, ops_.grid);

  // Step 1: Stokes with structure inertia/viscosity and Part I of the stress.
  FluidState f13;
  try {
    f13 = stokes_.solve(s.fluid, s.mesh.pos, geom, s.p_trace, cfg_.boundary.p_in(t_new),
                        cfg_.boundary.p_out(t_new), cfg_.beta, dt);
  } catch (const Error& e) {
    throw StepError("step 1 failed at t=" + std::to_string(t_new) + ": " + e.what());
  }

  // Step 2: fluid/ALE advection against w^{n+1/3}, the harmonic extension of
  // the Step-1 interface velocity onto the frozen domain. The mesh moves
  // vertically with the wall shape, so the domain velocity is radial.
  Eigen::VectorXd zeta_z(n), zeta_r(n);
  for (int k = 0; k < n; ++k) {
    zeta_z[k] = f13.u[2 * iface[k]];
    zeta_r[k] = f13.u[2 * iface[k] + 1];
  }
  const Eigen::VectorXd w13_z = Eigen::VectorXd::Zero(mesh_->n_fine());
  const Eigen::VectorXd w13_r = ext_.extend_interface(zeta_r);
  FluidState f23;
  try {
    f23 = step2_advect(f13, w13_z, w13_r, *mesh_, s.mesh.pos, dt);
  } catch (const Error& e) {
    throw StepError("step 2 failed at t=" + std::to_string(t_new) + ": " + e.what());
  }

  // Step 3: elastodynamics loaded by Part II (beta p^{n+1}), interface
  // velocity seeded with the trace of u^{n+2/3}. The wall endpoints keep the
  // structure's own velocity: their fluid DOFs are pinned by the corner
  // clamping and would otherwise feed a spurious O(1/dt) force into the
  // neighboring momentum rows when absorbing BCs let the endpoints move.
  const Eigen::VectorXd p_trace_new = interface_pressure_trace(f13.p);
  ShellState sh_in = s.shell;
  sh_in.zeta_z = zeta_z;
  sh_in.zeta_r = zeta_r;
  sh_in.zeta_z[0] = s.shell.zeta_z[0];
  sh_in.zeta_z[n - 1] = s.shell.zeta_z[n - 1];
  sh_in.zeta_r[0] = s.shell.zeta_r[0];
  sh_in.zeta_r[n - 1] = s.shell.zeta_r[n - 1];
  ShellState sh_new;
  try {
    sh_new = step3_solve(sh_in, p_trace_new, geom, ops_, cfg_.beta, dt);
  } catch (const Error& e) {
    throw StepError("step 3 failed at t=" + std::to_string(t_new) + ": " + e.what());
  }

  // Kinematic condition: the structure velocity is the interface trace. The
  // corner DOFs stay with Step 1's clamping u(0,R) = u(L,R) = 0, which wins
  // over the structure value when absorbing BCs move the wall endpoints.
  for (int k = 1; k + 1 < n; ++k) {
    f23.u[2 * iface[k]] = sh_new.zeta_z[k];
    f23.u[2 * iface[k] + 1] = sh_new.zeta_r[k];
  }

  // Mesh update, once per step, to the new wall shape.
  try {
    const Eigen::VectorXd dr = ext_.extend_interface(sh_new.eta_r);
    s.mesh.move_to(Eigen::VectorXd::Zero(mesh_->n_fine()), dr, dt);
  } catch (const Error& e) {
    throw StepError("mesh update after step 3 failed at t=" + std::to_string(t_new) + ": " +
                    e.what());
  }

  s.fluid = std::move(f23);
  s.shell = std::move(sh_new);
  s.p_trace = p_trace_new;
  s.t = t_new;
}

namespace {

// Degree-2 (3 midpoint) rule: exact for the quadratic integrands below.
constexpr double kMidWeight = 1.0 / 3.0;

double tri_quad_sq(const std::array<double, 3>& v) {
  // int over unit triangle of (sum v_i phi_i)^2 with midpoint rule, times 2A
  // applied by the caller. Midpoint values: (v0+v1)/2 etc.
  const double m01 = 0.5 * (v[0] + v[1]);
  const double m12 = 0.5 * (v[1] + v[2]);
  const double m20 = 0.5 * (v[2] + v[0]);
  return kMidWeight * (m01 * m01 + m12 * m12 + m20 * m20);
}

}  // namespace

EnergyBreakdown Simulation::energy_report(const CoupledState& s) const {
  EnergyBreakdown e;
  const auto& coords = s.mesh.pos;

  std::array<Eigen::Vector2d, 3> g;
  double A;
  for (const Tri& t : mesh_->tris) {
    tri_grads(coords, t, g, A);
    const std::array<double, 3> uz = {s.fluid.u[2 * t[0]], s.fluid.u[2 * t[1]],
                                      s.fluid.u[2 * t[2]]};
    const std::array<double, 3> ur = {s.fluid.u[2 * t[0] + 1], s.fluid.u[2 * t[1] + 1],
                                      s.fluid.u[2 * t[2] + 1]};
    e.fluid_kinetic += 0.5 * cfg_.fluid.rho_f * A * (tri_quad_sq(uz) + tri_quad_sq(ur));
    Eigen::Matrix2d grad = Eigen::Matrix2d::Zero();
    for (int k = 0; k < 3; ++k) {
      grad.row(0) += uz[k] * g[k].transpose();
      grad.row(1) += ur[k] * g[k].transpose();
    }
    const Eigen::Matrix2d D = 0.5 * (grad + grad.transpose());
    e.fluid_viscous_rate += 2.0 * cfg_.fluid.mu * A * D.squaredNorm();
  }

  const ShellEnergy se = shell_energy(s.shell, cfg_.wall, ops_.grid);
  e.shell_kinetic = se.kinetic;
  e.shell_elastic = se.membrane_elastic + se.flexural_elastic;
  e.shell_viscous_rate = se.membrane_viscous_rate + se.flexural_viscous_rate;

  // Work done by the inlet and outlet data on the current boundary sections.
  const double pin = cfg_.boundary.p_in(s.t), pout = cfg_.boundary.p_out(s.t);
  auto edge_work = [&](const std::vector<std::array<int, 2>>& edges) {
    double w = 0.0;
    for (const auto& ed : edges) {
      const Vec2 a = coords[ed[0]], b = coords[ed[1]];
      const double len = std::hypot(b.z - a.z, b.r - a.r);
      w += 0.5 * len * (s.fluid.u[2 * ed[0]] + s.fluid.u[2 * ed[1]]);
    }
    return w;
  };
  e.boundary_work_rate = pin * edge_work(mesh_->inlet_edges) - pout * edge_work(mesh_->outlet_edges);
  return e;
}

double Simulation::discrete_energy(const CoupledState& s) const {
  // Fixed inner product: the fluid kinetic term uses the reference-mesh mass
  // so the energy is a norm of the DOF vector, not of the moving measure.
  double kin = 0.0;
  for (const Tri& t : mesh_->tris) {
    const double A = tri_area(mesh_->nodes, t);
    for (int c = 0; c < 2; ++c) {
      const std::array<double, 3> v = {s.fluid.u[2 * t[0] + c], s.fluid.u[2 * t[1] + c],
                                       s.fluid.u[2 * t[2] + c]};
      kin += 0.5 * cfg_.fluid.rho_f * A * tri_quad_sq(v);
    }
  }
  const int n = ops_.grid.n();
  Eigen::VectorXd eta(2 * n), zeta(2 * n);
  eta.head(n) = s.shell.eta_z;
  eta.tail(n) = s.shell.eta_r;
  zeta.head(n) = s.shell.zeta_z;
  zeta.tail(n) = s.shell.zeta_r;
  const double shell_kin = 0.5 * (s.shell.zeta_z.dot(ops_.Ms * s.shell.zeta_z) +
                                  s.shell.zeta_r.dot(ops_.Ms * s.shell.zeta_r));
  const double shell_el = 0.5 * eta.dot(ops_.Ke * eta);
  return kin + shell_kin + shell_el;
}

RunResult run_simulation(const SimulationConfig& cfg, const StepHook& hook) {
  Simulation sim(cfg);
  CoupledState s = sim.initial_state();
  const long steps = std::lround(cfg.t_final / cfg.dt);
  if (std::abs(steps * cfg.dt - cfg.t_final) > 1e-9 * std::max(1.0, cfg.t_final))
    throw ConfigError("t_final is not a multiple of dt");
  if (hook) hook(0, s);
  for (long k = 1; k <= steps; ++k) {
    sim.advance(s);
    if (hook) hook(static_cast<int>(k), s);
  }
  return {std::move(s), static_cast<int>(steps)};
}

}  // namespace fsi
