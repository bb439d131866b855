#pragma once

#include <string>
#include <vector>

#include "fsi/driver.hpp"

namespace fsi {

constexpr double kDynPerMmHg = 1333.22;

// Midpoint observables recorded along a run.
struct ObservableSeries {
  std::vector<double> t;
  std::vector<double> diameter;       // 2 (R + eta_r) at z = L/2 (cm)
  std::vector<double> flowrate;       // cm^2/s in 2D
  std::vector<double> mean_pressure;  // dyn/cm^2
  std::vector<double> eta_z_mid;
  std::vector<double> eta_r_mid;

  void validate() const;
};

struct ConvergenceReport {
  std::vector<double> dt;                       // descending
  std::vector<double> err_u, err_p, err_eta;    // L2 errors vs reference
  std::vector<double> ord_u, ord_p, ord_eta;    // log-ratio orders, size dt-1
};

SimulationConfig benchmark_config(BenchmarkId id);

// Two-column CSV (t [s], p [dyn/cm^2]) holding one period of a waveform.
BoundaryData load_waveform(const std::string& path, double period, double mean_drop);
std::string default_cca_waveform_path();

// Cross-section quadrature on the deformed mesh: trapezoid along the fine
// node column nearest to z.
double flowrate(const FluidState& state, const MovingMesh& mesh, double z_section);
double mean_pressure(const FluidState& state, const MovingMesh& mesh, double z_section);

struct RunWithSeries {
  ObservableSeries series;
  CoupledState final_state;
};

// run_simulation plus midpoint observable recording each step.
RunWithSeries run_with_observables(const SimulationConfig& cfg, const StepHook& hook = {});

// Table-4/Table-7 protocol: fixed mesh, reference solution at dt_ref, L2
// errors of u, p, eta at t_eval and observed orders between successive dts.
// Runs execute concurrently up to the FSI_THREADS cap.
ConvergenceReport convergence_study(const SimulationConfig& cfg, std::vector<double> dt_list,
                                    double dt_ref, double t_eval);

// Energy dissipation ratio of a diameter-pressure loop: A1 is the loop area,
// A2 the area under the lower envelope down to the minimum-pressure baseline,
// EDR = A1/(A1+A2) * 100%.
double compute_edr(const std::vector<double>& diameter, const std::vector<double>& pressure,
                   double closure_tol = 0.05);

struct BcComparison {
  std::vector<double> z;             // wall grid
  std::vector<double> times;
  std::vector<Eigen::VectorXd> eta_r_absorbing;
  std::vector<Eigen::VectorXd> eta_r_dirichlet;
};

// Runs the given configuration under absorbing and clamped structure BCs and
// returns radial displacement profiles at the requested times.
BcComparison bc_comparison(const SimulationConfig& cfg, const std::vector<double>& t_eval);

int thread_cap();  // FSI_THREADS, defaulting to the hardware concurrency

}  // namespace fsi
