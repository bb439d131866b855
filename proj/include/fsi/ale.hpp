#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <memory>
#include <vector>

#include "fsi/mesh.hpp"
#include "fsi/shell.hpp"

namespace fsi {

// Interface geometry frozen at a time level: the Eulerian-to-Lagrangian
// Jacobian J = sqrt((1+eta_z')^2 + (eta_r')^2) and the unit outward normal
// n = (-eta_r', 1+eta_z') / J, evaluated per wall node.
struct InterfaceGeometry {
  Eigen::VectorXd jacobian;
  std::vector<Vec2> normal;
};

InterfaceGeometry interface_geometry(const Eigen::VectorXd& eta_z, const Eigen::VectorXd& eta_r,
                                     const WallGrid& grid);

// Harmonic extension of boundary data into the reference domain. The P1
// Laplacian is assembled and factorized once on the reference mesh; every
// extension reuses the factorization.
class HarmonicExtension {
 public:
  explicit HarmonicExtension(const Mesh& mesh);

  // Dirichlet data given on every boundary node (interior entries ignored).
  Eigen::VectorXd extend_boundary(const Eigen::VectorXd& boundary_values) const;

  // FSI usage: data on the interface nodes, zero on the other boundaries.
  Eigen::VectorXd extend_interface(const Eigen::VectorXd& interface_values) const;

 private:
  const Mesh* mesh_;
  std::vector<int> interior_;          // interior node ids
  std::vector<int> boundary_;          // boundary node ids
  std::vector<int> index_in_interior_ptr_;  // node -> position in interior_, or -1
  SpMat K_ib_;                         // interior x boundary coupling
  Eigen::SimplicialLLT<SpMat> llt_;
};

Eigen::VectorXd domain_velocity(const Eigen::VectorXd& disp_new, const Eigen::VectorXd& disp_old,
                                double dt);

// Reference mesh plus its current ALE deformation state.
struct MovingMesh {
  std::shared_ptr<const Mesh> ref;
  Eigen::VectorXd disp_z, disp_r;  // per fine node
  Eigen::VectorXd w_z, w_r;        // domain velocity per fine node
  std::vector<Vec2> pos;           // current node positions

  static MovingMesh reference(std::shared_ptr<const Mesh> mesh);

  // Applies a new displacement field, refreshing positions and the domain
  // velocity (disp_new - disp_old)/dt. Throws MeshError on element inversion.
  void move_to(const Eigen::VectorXd& dz, const Eigen::VectorXd& dr, double dt);

  double min_signed_area() const;
};

}  // namespace fsi
