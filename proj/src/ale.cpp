#include "fsi/ale.hpp"

#include <cmath>
#include <limits>

namespace fsi {

namespace {

// Three-point Lagrange derivative weights at x0 for nodes (x0, x1, x2).
std::array<double, 3> one_sided_weights(double x0, double x1, double x2) {
  const double d01 = x0 - x1, d02 = x0 - x2, d12 = x1 - x2;
  return {(d01 + d02) / (d01 * d02), -d02 / (d01 * d12), d01 / (d02 * d12)};
}

Eigen::VectorXd fd_derivative(const Eigen::VectorXd& f, const std::vector<double>& z) {
  const int n = static_cast<int>(z.size());
  Eigen::VectorXd d(n);
  for (int i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (z[i + 1] - z[i - 1]);
  {
    const auto w = one_sided_weights(z[0], z[1], z[2]);
    d[0] = w[0] * f[0] + w[1] * f[1] + w[2] * f[2];
  }
  {
    const auto w = one_sided_weights(z[n - 1], z[n - 2], z[n - 3]);
    d[n - 1] = w[0] * f[n - 1] + w[1] * f[n - 2] + w[2] * f[n - 3];
  }
  return d;
}

}  // namespace

InterfaceGeometry interface_geometry(const Eigen::VectorXd& eta_z, const Eigen::VectorXd& eta_r,
                                     const WallGrid& grid) {
  const int n = grid.n();
  const Eigen::VectorXd dz = fd_derivative(eta_z, grid.z);
  const Eigen::VectorXd dr = fd_derivative(eta_r, grid.z);
  InterfaceGeometry g;
  g.jacobian.resize(n);
  g.normal.resize(n);
  for (int i = 0; i < n; ++i) {
    const double a = 1.0 + dz[i], b = dr[i];
    const double J = std::sqrt(a * a + b * b);
    g.jacobian[i] = J;
    g.normal[i] = {-b / J, a / J};
  }
  return g;
}

HarmonicExtension::HarmonicExtension(const Mesh& mesh) : mesh_(&mesh) {
  const int N = mesh.n_fine();
  std::vector<char> on_boundary(N, 0);
  for (int i : mesh.interface_nodes) on_boundary[i] = 1;
  for (int i : mesh.axis_nodes) on_boundary[i] = 1;
  for (int i : mesh.inlet_nodes) on_boundary[i] = 1;
  for (int i : mesh.outlet_nodes) on_boundary[i] = 1;

  index_in_interior_ptr_.assign(N, -1);
  for (int i = 0; i < N; ++i) {
    if (on_boundary[i])
      boundary_.push_back(i);
    else {
      index_in_interior_ptr_[i] = static_cast<int>(interior_.size());
      interior_.push_back(i);
    }
  }

  const SpMat K = assemble_stiffness(mesh, mesh.nodes);
  const int ni = static_cast<int>(interior_.size());
  std::vector<Eigen::Triplet<double>> tii, tib;
  for (int k = 0; k < K.outerSize(); ++k)
    for (SpMat::InnerIterator it(K, k); it; ++it) {
      const int ri = index_in_interior_ptr_[it.row()];
      if (ri < 0) continue;
      const int ci = index_in_interior_ptr_[it.col()];
      if (ci >= 0)
        tii.emplace_back(ri, ci, it.value());
      else
        tib.emplace_back(ri, it.col(), it.value());
    }
  SpMat Kii(ni, ni);
  Kii.setFromTriplets(tii.begin(), tii.end());
  K_ib_.resize(ni, N);
  K_ib_.setFromTriplets(tib.begin(), tib.end());
  llt_.compute(Kii);
  if (llt_.info() != Eigen::Success)
    throw MeshError("harmonic extension: singular Laplacian (disconnected mesh?)");
}

Eigen::VectorXd HarmonicExtension::extend_boundary(const Eigen::VectorXd& boundary_values) const {
  const int N = mesh_->n_fine();
  Eigen::VectorXd g = Eigen::VectorXd::Zero(N);
  for (int b : boundary_) {
    const double v = boundary_values[b];
    if (!std::isfinite(v)) throw ParameterError("harmonic extension: non-finite boundary data");
    g[b] = v;
  }
  const Eigen::VectorXd xi = llt_.solve(-(K_ib_ * g));
  Eigen::VectorXd out = g;
  for (size_t k = 0; k < interior_.size(); ++k) out[interior_[k]] = xi[k];
  return out;
}

Eigen::VectorXd HarmonicExtension::extend_interface(const Eigen::VectorXd& interface_values) const {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(mesh_->n_fine());
  const auto& iface = mesh_->interface_nodes;
  for (size_t k = 0; k < iface.size(); ++k) g[iface[k]] = interface_values[k];
  return extend_boundary(g);
}

Eigen::VectorXd domain_velocity(const Eigen::VectorXd& disp_new, const Eigen::VectorXd& disp_old,
                                double dt) {
  if (!(dt > 0.0)) throw ParameterError("domain_velocity: dt must be positive");
  if (disp_new.size() != disp_old.size())
    throw ParameterError("domain_velocity: displacement fields differ in size");
  return (disp_new - disp_old) / dt;
}

MovingMesh MovingMesh::reference(std::shared_ptr<const Mesh> mesh) {
  MovingMesh m;
  m.ref = std::move(mesh);
  const int N = m.ref->n_fine();
  m.disp_z = Eigen::VectorXd::Zero(N);
  m.disp_r = Eigen::VectorXd::Zero(N);
  m.w_z = Eigen::VectorXd::Zero(N);
  m.w_r = Eigen::VectorXd::Zero(N);
  m.pos = m.ref->nodes;
  return m;
}

void MovingMesh::move_to(const Eigen::VectorXd& dz, const Eigen::VectorXd& dr, double dt) {
  w_z = domain_velocity(dz, disp_z, dt);
  w_r = domain_velocity(dr, disp_r, dt);
  disp_z = dz;
  disp_r = dr;
  for (int i = 0; i < ref->n_fine(); ++i)
    pos[i] = {ref->nodes[i].z + disp_z[i], ref->nodes[i].r + disp_r[i]};
  if (min_signed_area() <= 0.0) throw MeshError("ALE update tangled the mesh");
}

double MovingMesh::min_signed_area() const {
  double amin = std::numeric_limits<double>::max();
  for (const Tri& t : ref->tris) amin = std::min(amin, tri_area(pos, t));
  return amin;
}

}  // namespace fsi
