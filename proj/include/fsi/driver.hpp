#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "fsi/ale.hpp"
#include "fsi/fluid.hpp"
#include "fsi/mesh.hpp"
#include "fsi/shell.hpp"

namespace fsi {

enum class BenchmarkId { example1, example1b, example2, cca };

const char* to_string(BenchmarkId id);
BenchmarkId benchmark_from_string(const std::string& s);

struct SimulationConfig {
  WallParams wall;   // wall.R mirrors the channel half-height
  FluidParams fluid;
  std::optional<FormaggiaParams> formaggia;  // reduced-model coefficients when set
  std::optional<double> C0_override;
  bool longitudinal = true;  // false: radial-only structure (eta_z pinned)

  double L = 0.0;
  double dt = 0.0;
  double t_final = 0.0;
  double beta = 1.0;
  ShellBc wall_bc = ShellBc::clamped;
  int nz = 0, nr = 0;  // coarse (pressure) node counts

  BoundaryData boundary;
  std::optional<BenchmarkId> benchmark;

  std::string output_dir;
  int snapshot_every = 0;  // 0 disables snapshots

  void validate() const;
  KoiterCoefficients coefficients() const;
};

struct CoupledState {
  FluidState fluid;
  ShellState shell;
  MovingMesh mesh;
  double t = 0.0;
  Eigen::VectorXd p_trace;  // interface trace of p^n on the wall grid
};

struct EnergyBreakdown {
  double fluid_kinetic = 0.0;
  double shell_kinetic = 0.0;
  double shell_elastic = 0.0;       // membrane + flexural
  double shell_viscous_rate = 0.0;  // membrane + flexural
  double fluid_viscous_rate = 0.0;  // 2 mu ||D(u)||^2
  double boundary_work_rate = 0.0;
};

// Kinematically coupled beta-scheme driver. Holds everything that is fixed
// for a run: the mesh pair, the factorized ALE extension operator, the shell
// operators and the Step-1 solver caches. The time loop itself is strictly
// sequential; distinct Simulation instances may run concurrently.
class Simulation {
 public:
  explicit Simulation(SimulationConfig cfg);
  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  const SimulationConfig& config() const { return cfg_; }
  const Mesh& mesh() const { return *mesh_; }
  const ShellOperators& shell_ops() const { return ops_; }
  const HarmonicExtension& extension() const { return ext_; }
  const KoiterCoefficients& coefficients() const { return coeffs_; }

  CoupledState initial_state() const;

  // Rebuilds the ALE mesh after the caller modified the shell displacement
  // (used to seed nonzero initial displacement).
  void apply_displacement(CoupledState& s) const;

  // One full Step 1 -> Step 2 -> Step 3 sweep plus the mesh update.
  void advance(CoupledState& s);

  EnergyBreakdown energy_report(const CoupledState& s) const;

  // Discrete energy actually governed by the scheme: fluid kinetic plus shell
  // kinetic plus shell elastic, all through the assembled operators.
  double discrete_energy(const CoupledState& s) const;

  Eigen::VectorXd interface_pressure_trace(const Eigen::VectorXd& p_coarse) const;

 private:
  SimulationConfig cfg_;
  std::shared_ptr<const Mesh> mesh_;
  KoiterCoefficients coeffs_;
  ShellOperators ops_;
  HarmonicExtension ext_;
  StokesSolver stokes_;
};

using StepHook = std::function<void(int step, const CoupledState&)>;

struct RunResult {
  CoupledState final_state;
  int steps = 0;
};

// Time loop from 0 to t_final; the hook fires on the initial state (step 0)
// and after every advance. Deterministic for a given config.
RunResult run_simulation(const SimulationConfig& cfg, const StepHook& hook = {});

}  // namespace fsi
