#include "fsi/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace fsi {

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void check_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw DataError(std::string("refusing to write non-finite ") + what);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open output file: " + path);
  return out;
}

}  // namespace

void write_timeseries(const ObservableSeries& s, const std::string& path) {
  s.validate();
  for (size_t i = 0; i < s.t.size(); ++i) {
    check_finite(s.t[i], "timeseries");
    check_finite(s.diameter[i], "timeseries");
    check_finite(s.flowrate[i], "timeseries");
    check_finite(s.mean_pressure[i], "timeseries");
    check_finite(s.eta_z_mid[i], "timeseries");
    check_finite(s.eta_r_mid[i], "timeseries");
  }
  std::ofstream out = open_out(path);
  out << "t,diameter,flowrate,mean_pressure,eta_z_mid,eta_r_mid\n";
  for (size_t i = 0; i < s.t.size(); ++i)
    out << fmt17(s.t[i]) << ',' << fmt17(s.diameter[i]) << ',' << fmt17(s.flowrate[i]) << ','
        << fmt17(s.mean_pressure[i]) << ',' << fmt17(s.eta_z_mid[i]) << ','
        << fmt17(s.eta_r_mid[i]) << '\n';
  if (!out) throw IoError("write failed: " + path);
}

ObservableSeries read_timeseries(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open timeseries file: " + path);
  std::string line;
  if (!std::getline(in, line) || line != "t,diameter,flowrate,mean_pressure,eta_z_mid,eta_r_mid")
    throw DataError("timeseries: unexpected header in " + path);
  ObservableSeries s;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double t, d, q, p, ez, er;
    if (!(ls >> t >> d >> q >> p >> ez >> er))
      throw DataError("timeseries: malformed row in " + path);
    s.t.push_back(t);
    s.diameter.push_back(d);
    s.flowrate.push_back(q);
    s.mean_pressure.push_back(p);
    s.eta_z_mid.push_back(ez);
    s.eta_r_mid.push_back(er);
  }
  s.validate();
  return s;
}

void write_vtk_snapshot(const CoupledState& state, const std::string& path) {
  const Mesh& mesh = *state.mesh.ref;
  const int N = mesh.n_fine();
  const Eigen::VectorXd pf = mesh.prolong * state.fluid.p;
  for (int i = 0; i < N; ++i) {
    check_finite(state.fluid.u[2 * i], "vtk velocity");
    check_finite(state.fluid.u[2 * i + 1], "vtk velocity");
    check_finite(pf[i], "vtk pressure");
    check_finite(state.mesh.pos[i].z, "vtk coordinates");
    check_finite(state.mesh.pos[i].r, "vtk coordinates");
  }

  std::ofstream out = open_out(path);
  out << "# vtk DataFile Version 3.0\n";
  out << "fsi snapshot t=" << fmt17(state.t) << "\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << N << " double\n";
  for (int i = 0; i < N; ++i)
    out << fmt17(state.mesh.pos[i].z) << ' ' << fmt17(state.mesh.pos[i].r) << " 0\n";
  const size_t M = mesh.tris.size();
  out << "CELLS " << M << ' ' << 4 * M << "\n";
  for (const Tri& t : mesh.tris) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << "\n";
  out << "CELL_TYPES " << M << "\n";
  for (size_t k = 0; k < M; ++k) out << "5\n";
  out << "POINT_DATA " << N << "\n";
  out << "VECTORS velocity double\n";
  for (int i = 0; i < N; ++i)
    out << fmt17(state.fluid.u[2 * i]) << ' ' << fmt17(state.fluid.u[2 * i + 1]) << " 0\n";
  out << "SCALARS pressure double 1\n";
  out << "LOOKUP_TABLE default\n";
  for (int i = 0; i < N; ++i) out << fmt17(pf[i]) << "\n";
  if (!out) throw IoError("write failed: " + path);
}

void write_convergence_report(const ConvergenceReport& r, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "dt,err_u,ord_u,err_p,ord_p,err_eta,ord_eta\n";
  for (size_t i = 0; i < r.dt.size(); ++i) {
    auto ord = [&](const std::vector<double>& o) {
      return i == 0 ? std::string("-") : fmt17(o[i - 1]);
    };
    out << fmt17(r.dt[i]) << ',' << fmt17(r.err_u[i]) << ',' << ord(r.ord_u) << ','
        << fmt17(r.err_p[i]) << ',' << ord(r.ord_p) << ',' << fmt17(r.err_eta[i]) << ','
        << ord(r.ord_eta) << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

void write_bc_comparison(const BcComparison& c, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "z";
  for (double t : c.times) out << ",eta_r_absorbing_t" << fmt17(t) << ",eta_r_dirichlet_t" << fmt17(t);
  out << "\n";
  for (size_t i = 0; i < c.z.size(); ++i) {
    out << fmt17(c.z[i]);
    for (size_t k = 0; k < c.times.size(); ++k)
      out << ',' << fmt17(c.eta_r_absorbing[k][i]) << ',' << fmt17(c.eta_r_dirichlet[k][i]);
    out << "\n";
  }
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace fsi
