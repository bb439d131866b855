#pragma once

#include <string>

#include "fsi/bench.hpp"
#include "fsi/driver.hpp"

namespace fsi {

// CSV with header t,diameter,flowrate,mean_pressure,eta_z_mid,eta_r_mid and
// full double precision. Throws DataError if the series contains NaN.
void write_timeseries(const ObservableSeries& series, const std::string& path);
ObservableSeries read_timeseries(const std::string& path);

// Legacy ASCII VTK unstructured grid on the current node positions with
// point data `velocity` (3-vector, third component zero) and `pressure`
// interpolated to the fine nodes.
void write_vtk_snapshot(const CoupledState& state, const std::string& path);

void write_convergence_report(const ConvergenceReport& report, const std::string& path);

void write_bc_comparison(const BcComparison& cmp, const std::string& path);

}  // namespace fsi
