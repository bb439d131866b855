#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <optional>
#include <vector>

#include "fsi/errors.hpp"
#include "fsi/mesh.hpp"

namespace fsi {

// Material and geometric parameters of the viscoelastic cylindrical Koiter
// shell, CGS units throughout.
struct WallParams {
  double E = 0.0;      // Young's modulus (dyn/cm^2)
  double sigma = 0.0;  // Poisson ratio
  double Cv = 0.0;     // structural viscosity E_v/(1-sigma_v^2) (poise cm)
  double Dv = 0.0;     // structural viscosity E_v sigma_v/(1-sigma_v^2) (poise cm)
  double rho_s = 0.0;  // wall density (g/cm^3)
  double h = 0.0;      // wall thickness (cm)
  double R = 0.0;      // reference radius (cm)

  void validate() const;
};

// Reduced (radial-only) model parameters: bending rigidity through the shear
// modulus and Timoshenko correction factor.
struct FormaggiaParams {
  double k = 1.0;      // Timoshenko shear correction factor
  double G = 0.0;      // shear modulus (dyn/cm^2)
  double gamma = 0.0;  // structural viscosity (poise cm)
};

inline double shear_modulus(double E, double sigma) { return E / (2.0 * (1.0 + sigma)); }

// Coefficients of the dynamic equilibrium equations,
//   rho_s h d2(eta_z)/dt2 - C2 d(eta_r)/dz - C3 d2(eta_z)/dz2
//                         - D2 d2(eta_r)/dtdz - D3 d3(eta_z)/dtdz2 = f_z
//   rho_s h d2(eta_r)/dt2 + C0 eta_r - C1 d2(eta_r)/dz2 + C2 d(eta_z)/dz
//     + C4 d4(eta_r)/dz4 + D0 d(eta_r)/dt - D1 d3(eta_r)/dtdz2
//     + D2 d2(eta_z)/dtdz + D4 d5(eta_r)/dtdz4 = f_r.
// The 4th/5th-order terms (C4, D4) are computed but never assembled.
struct KoiterCoefficients {
  double C0 = 0, C1 = 0, C2 = 0, C3 = 0, C4 = 0;
  double D0 = 0, D1 = 0, D2 = 0, D3 = 0, D4 = 0;
};

KoiterCoefficients koiter_coefficients(const WallParams& w);
KoiterCoefficients formaggia_coefficients(const FormaggiaParams& f, const WallParams& w);

// 1D wall grid: the trace of the fine fluid mesh on the reference interface.
struct WallGrid {
  std::vector<double> z;  // ascending node coordinates

  int n() const { return static_cast<int>(z.size()); }
  double length() const { return z.back() - z.front(); }
};

enum class ShellBc { clamped, absorbing };

// Nodal displacement and interface velocity on the wall grid. By the
// kinematic condition zeta equals the trace of the fluid velocity.
struct ShellState {
  Eigen::VectorXd eta_z, eta_r, zeta_z, zeta_r;

  static ShellState rest(int n);
};

// Assembled 1D P1 operators of the shell. Matrices are stored on the full
// grid; boundary conditions are applied at solve time according to `bc`.
// DOF layout for the 2n x 2n block operators: [eta_z nodes; eta_r nodes].
struct ShellOperators {
  WallGrid grid;
  ShellBc bc = ShellBc::clamped;
  bool radial_only = false;  // reduced model: eta_z pinned to zero
  double rho_s_h = 0.0;
  double wave_speed = 0.0;  // sqrt(C1/(rho_s h)), used by the absorbing rows

  SpMat M1;  // n x n plain P1 mass
  SpMat Ms;  // n x n shell mass, rho_s h * M1
  SpMat Ke;  // elastic stiffness: C0..C3 terms (C4 dropped)
  SpMat Kv;  // viscous stiffness: D0..D3 terms (D4 dropped)
};

ShellOperators assemble_shell_operators(const KoiterCoefficients& c, const WallGrid& grid,
                                        ShellBc bc, double rho_s_h, bool radial_only = false);

// Variable-coefficient coupling blocks with nodal coefficient c(z):
// z rows get -int c eta_r' xi_z, r rows get +int c eta_z' xi_r. Used for the
// pressure-dependent modification of C2 in Step 3.
SpMat assemble_coupling(const WallGrid& grid, const Eigen::VectorXd& nodal_coeff);

struct InterfaceGeometry;  // defined in ale.hpp

// One backward-Euler step of the Step-3 elastodynamics problem in its
// implicit-normal form: coupling coefficient (C2 - beta p) applied per node
// and radial forcing beta p. Geometry stays frozen; the implicit normal
// absorbs the J n factor, so `geom` only fixes the contract that the caller
// evaluated it at t^n.
ShellState step3_solve(const ShellState& state, const Eigen::VectorXd& p_trace,
                       const InterfaceGeometry& geom, const ShellOperators& ops, double beta,
                       double dt);

struct ShellEnergy {
  double kinetic = 0.0;
  double membrane_elastic = 0.0;
  double flexural_elastic = 0.0;
  double membrane_viscous_rate = 0.0;
  double flexural_viscous_rate = 0.0;
};

// Energy terms of the shell energy identity, integrated exactly over the P1
// interpolant (second derivatives of eta_r vanish elementwise).
ShellEnergy shell_energy(const ShellState& state, const WallParams& w, const WallGrid& grid);

}  // namespace fsi
