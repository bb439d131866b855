#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <array>
#include <cstdint>
#include <vector>

#include "fsi/errors.hpp"

namespace fsi {

struct Vec2 {
  double z = 0.0;
  double r = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.z + b.z, a.r + b.r}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.z - b.z, a.r - b.r}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.z, s * a.r}; }

using Tri = std::array<int, 3>;
using SpMat = Eigen::SparseMatrix<double>;

// Bercovier-Pironneau (P1-iso-P2) mesh pair on the reference rectangle
// (0,L) x (0,R): a coarse pressure grid of nz x nr nodes and a fine velocity
// grid obtained by one uniform refinement (each coarse triangle split in 4).
// Diagonals alternate per coarse cell so that meshes built with odd nz are
// mirror-symmetric about z = L/2.
struct Mesh {
  double L = 0.0;
  double R = 0.0;
  int nzc = 0, nrc = 0;  // coarse node counts
  int nzf = 0, nrf = 0;  // fine node counts, nzf = 2*nzc - 1

  std::vector<Vec2> nodes;        // fine node reference coordinates
  std::vector<Tri> tris;          // fine triangles, counterclockwise
  std::vector<Tri> tris_coarse;   // coarse triangles (coarse node ids)
  std::vector<int> coarse_to_fine;

  // Pressure prolongation: fine nodal values of a coarse P1 function.
  SpMat prolong;  // n_fine x n_coarse

  // Boundary node sets (a partition: interface owns the top corners, the
  // symmetry axis owns the bottom corners).
  std::vector<int> interface_nodes;  // ordered by z, left to right
  std::vector<int> inlet_nodes;      // excludes corners
  std::vector<int> outlet_nodes;     // excludes corners
  std::vector<int> axis_nodes;       // includes bottom corners, ordered by z

  // Boundary edges in counterclockwise traversal (domain on the left).
  std::vector<std::array<int, 2>> inlet_edges;
  std::vector<std::array<int, 2>> outlet_edges;

  // Triangle adjacency: neighbor across the edge opposite local vertex k.
  std::vector<Tri> tri_neighbors;
  std::vector<int> node_to_tri;  // one incident triangle per fine node

  int n_fine() const { return nzf * nrf; }
  int n_coarse() const { return nzc * nrc; }
  int fine_id(int i, int j) const { return j * nzf + i; }

  // Wall grid = reference z coordinates of the interface fine nodes.
  std::vector<double> wall_z() const;
};

Mesh build_mesh(int n_z, int n_r, double L, double R);

// --- P1 assembly helpers on a given (possibly deformed) node layout ---

double tri_area(const std::vector<Vec2>& xy, const Tri& t);

// Gradients of the three P1 basis functions on a triangle; area returned.
void tri_grads(const std::vector<Vec2>& xy, const Tri& t,
               std::array<Eigen::Vector2d, 3>& grad, double& area);

// Scalar P1 mass and stiffness matrices over the fine triangulation.
SpMat assemble_mass(const Mesh& mesh, const std::vector<Vec2>& xy);
SpMat assemble_stiffness(const Mesh& mesh, const std::vector<Vec2>& xy);

// Divergence pairing on the fine mesh: B_fine[i, 2b+c] = int phi_i d_c phi_b.
SpMat assemble_divergence_fine(const Mesh& mesh, const std::vector<Vec2>& xy);

// --- point location ---

struct LocateResult {
  bool inside = false;
  int tri = -1;
  std::array<double, 3> bary{};
};

// Walks the triangulation from start_tri toward p; falls back to a global
// scan if the walk cycles. coords are current node positions.
LocateResult locate_point(const Mesh& mesh, const std::vector<Vec2>& coords,
                          Vec2 p, int start_tri);

// P1 interpolation of an interleaved 2-component nodal field at a located point.
Eigen::Vector2d interp_field(const Mesh& mesh, const Eigen::VectorXd& field,
                             const LocateResult& loc);

}  // namespace fsi
