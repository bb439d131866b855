#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <optional>
#include <string>
#include <vector>

#include "fsi/ale.hpp"
#include "fsi/mesh.hpp"
#include "fsi/shell.hpp"

namespace fsi {

struct FluidParams {
  double rho_f = 0.0;  // density (g/cm^3)
  double mu = 0.0;     // dynamic viscosity (poise)

  void validate() const;
};

// Velocity DOFs live on the fine mesh, interleaved (u_z, u_r) per node;
// pressure DOFs on the coarse mesh.
struct FluidState {
  Eigen::VectorXd u;  // 2 * n_fine
  Eigen::VectorXd p;  // n_coarse

  static FluidState rest(const Mesh& mesh);
};

// Inlet/outlet normal-stress data: a closed-form pulse, a sampled periodic
// waveform (inlet carries the mean drop), or constant values.
struct BoundaryData {
  enum class Kind { pulse, waveform, constant };
  Kind kind = Kind::constant;

  // pulse
  double p_max = 0.0;
  double t_max = 0.0;
  // waveform
  std::vector<double> sample_t;  // strictly increasing, within [0, period)
  std::vector<double> sample_p;  // dyn/cm^2
  double period = 0.0;
  double mean_drop = 0.0;        // total inlet-outlet drop (dyn/cm^2)
  std::string waveform_path;     // provenance, for config round trips
  // constant
  double p_in_const = 0.0;
  double p_out_const = 0.0;

  double p_in(double t) const;
  double p_out(double t) const;
  double waveform_value(double t) const;  // periodic linear interpolation
  void validate() const;

  static BoundaryData pulse(double p_max, double t_max);
  static BoundaryData constant(double p_in, double p_out);
};

double inlet_pressure_pulse(double t, double p_max, double t_max);

// Step 1: one backward-Euler step of the time-dependent Stokes problem on the
// frozen domain, with the structure inertia and viscous operators acting on
// the interface velocity trace and the explicit beta J p n load. The sparsity
// pattern is analyzed once and reused across time steps.
class StokesSolver {
 public:
  StokesSolver(const Mesh& mesh, const ShellOperators& ops, const FluidParams& fp);

  FluidState solve(const FluidState& state, const std::vector<Vec2>& coords,
                   const InterfaceGeometry& geom, const Eigen::VectorXd& p_trace, double p_in,
                   double p_out, double beta, double dt);

  // Residual of the discrete divergence constraint, max norm.
  double divergence_residual(const Eigen::VectorXd& u, const std::vector<Vec2>& coords) const;

  const std::vector<int>& dirichlet_dofs() const { return dirichlet_; }

 private:
  const Mesh* mesh_;
  const ShellOperators* ops_;
  FluidParams fp_;
  int nv_, np_, ndof_;
  std::vector<int> dirichlet_;  // velocity DOFs pinned to zero
  std::vector<char> is_dirichlet_;
  Eigen::SparseLU<SpMat> lu_;
  bool analyzed_ = false;

  void gather_triplets(const FluidState& state, const std::vector<Vec2>& coords,
                       const InterfaceGeometry& geom, const Eigen::VectorXd& p_trace, double p_in,
                       double p_out, double beta, double dt,
                       std::vector<Eigen::Triplet<double>>& trip, Eigen::VectorXd& rhs) const;
};

// Step 2: pure advection by the relative velocity a = u - w, solved by an
// explicit node-wise method of characteristics with linear interpolation and
// CFL-limited sub-stepping. Nodes listed in `frozen` keep their values (the
// interface trace). Throws StepError if the sub-step count exceeds the cap.
Eigen::VectorXd advect_characteristics(const Mesh& mesh, const std::vector<Vec2>& coords,
                                       const Eigen::VectorXd& field, const Eigen::VectorXd& advect,
                                       double dt, const std::vector<char>& frozen,
                                       int max_substeps = 10000);

FluidState step2_advect(const FluidState& state, const Eigen::VectorXd& w_z,
                        const Eigen::VectorXd& w_r, const Mesh& mesh,
                        const std::vector<Vec2>& coords, double dt);

}  // namespace fsi
