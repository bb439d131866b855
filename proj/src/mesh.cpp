#include "fsi/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace fsi {

namespace {

// Diagonal orientation per coarse cell; alternating so odd-nz meshes are
// mirror-symmetric in z.
inline bool ne_diagonal(int cell_i, int cell_j) { return ((cell_i + cell_j) % 2) == 0; }

void split_cell(std::vector<Tri>& tris, int a, int b, int c, int d, bool ne) {
  // Cell corners: a = (i,j), b = (i+1,j), c = (i+1,j+1), d = (i,j+1).
  if (ne) {
    tris.push_back({a, b, c});
    tris.push_back({a, c, d});
  } else {
    tris.push_back({a, b, d});
    tris.push_back({b, c, d});
  }
}

}  // namespace

std::vector<double> Mesh::wall_z() const {
  std::vector<double> z(interface_nodes.size());
  for (size_t k = 0; k < interface_nodes.size(); ++k) z[k] = nodes[interface_nodes[k]].z;
  return z;
}

Mesh build_mesh(int n_z, int n_r, double L, double R) {
  if (n_z < 2 || n_r < 2) throw MeshError("build_mesh: need at least 2x2 coarse nodes");
  if (!(L > 0.0) || !(R > 0.0)) throw MeshError("build_mesh: non-positive domain size");

  Mesh m;
  m.L = L;
  m.R = R;
  m.nzc = n_z;
  m.nrc = n_r;
  m.nzf = 2 * n_z - 1;
  m.nrf = 2 * n_r - 1;

  const double hz = L / (m.nzf - 1);
  const double hr = R / (m.nrf - 1);
  m.nodes.resize(m.n_fine());
  for (int j = 0; j < m.nrf; ++j)
    for (int i = 0; i < m.nzf; ++i) m.nodes[m.fine_id(i, j)] = {i * hz, j * hr};

  // Fine triangulation; each fine cell inherits its parent coarse cell's diagonal.
  for (int j = 0; j + 1 < m.nrf; ++j)
    for (int i = 0; i + 1 < m.nzf; ++i) {
      const bool ne = ne_diagonal(i / 2, j / 2);
      split_cell(m.tris, m.fine_id(i, j), m.fine_id(i + 1, j), m.fine_id(i + 1, j + 1),
                 m.fine_id(i, j + 1), ne);
    }

  // Coarse triangulation over coarse node ids.
  auto coarse_id = [&](int I, int J) { return J * n_z + I; };
  for (int J = 0; J + 1 < n_r; ++J)
    for (int I = 0; I + 1 < n_z; ++I)
      split_cell(m.tris_coarse, coarse_id(I, J), coarse_id(I + 1, J), coarse_id(I + 1, J + 1),
                 coarse_id(I, J + 1), ne_diagonal(I, J));

  m.coarse_to_fine.resize(m.n_coarse());
  for (int J = 0; J < n_r; ++J)
    for (int I = 0; I < n_z; ++I) m.coarse_to_fine[coarse_id(I, J)] = m.fine_id(2 * I, 2 * J);

  // Prolongation of coarse P1 functions to fine nodes. Midpoints of coarse
  // cell diagonals average the two diagonal endpoints of their own cell.
  {
    std::vector<Eigen::Triplet<double>> trip;
    for (int j = 0; j < m.nrf; ++j)
      for (int i = 0; i < m.nzf; ++i) {
        const int f = m.fine_id(i, j);
        const bool iodd = (i % 2) != 0, jodd = (j % 2) != 0;
        if (!iodd && !jodd) {
          trip.emplace_back(f, coarse_id(i / 2, j / 2), 1.0);
        } else if (iodd && !jodd) {
          trip.emplace_back(f, coarse_id(i / 2, j / 2), 0.5);
          trip.emplace_back(f, coarse_id(i / 2 + 1, j / 2), 0.5);
        } else if (!iodd && jodd) {
          trip.emplace_back(f, coarse_id(i / 2, j / 2), 0.5);
          trip.emplace_back(f, coarse_id(i / 2, j / 2 + 1), 0.5);
        } else {
          const int I = i / 2, J = j / 2;
          if (ne_diagonal(I, J)) {
            trip.emplace_back(f, coarse_id(I, J), 0.5);
            trip.emplace_back(f, coarse_id(I + 1, J + 1), 0.5);
          } else {
            trip.emplace_back(f, coarse_id(I + 1, J), 0.5);
            trip.emplace_back(f, coarse_id(I, J + 1), 0.5);
          }
        }
      }
    m.prolong.resize(m.n_fine(), m.n_coarse());
    m.prolong.setFromTriplets(trip.begin(), trip.end());
  }

  // Boundary sets.
  for (int i = 0; i < m.nzf; ++i) m.interface_nodes.push_back(m.fine_id(i, m.nrf - 1));
  for (int i = 0; i < m.nzf; ++i) m.axis_nodes.push_back(m.fine_id(i, 0));
  for (int j = 1; j < m.nrf - 1; ++j) {
    m.inlet_nodes.push_back(m.fine_id(0, j));
    m.outlet_nodes.push_back(m.fine_id(m.nzf - 1, j));
  }

  // Counterclockwise boundary edges: outlet goes bottom to top, inlet top to bottom.
  for (int j = 0; j + 1 < m.nrf; ++j)
    m.outlet_edges.push_back({m.fine_id(m.nzf - 1, j), m.fine_id(m.nzf - 1, j + 1)});
  for (int j = m.nrf - 1; j > 0; --j)
    m.inlet_edges.push_back({m.fine_id(0, j), m.fine_id(0, j - 1)});

  // Triangle adjacency via sorted-edge map.
  m.tri_neighbors.assign(m.tris.size(), {-1, -1, -1});
  {
    std::map<std::pair<int, int>, std::pair<int, int>> edge_owner;  // edge -> (tri, local k)
    for (size_t t = 0; t < m.tris.size(); ++t) {
      for (int k = 0; k < 3; ++k) {
        int a = m.tris[t][(k + 1) % 3], b = m.tris[t][(k + 2) % 3];
        if (a > b) std::swap(a, b);
        auto key = std::make_pair(a, b);
        auto it = edge_owner.find(key);
        if (it == edge_owner.end()) {
          edge_owner[key] = {static_cast<int>(t), k};
        } else {
          m.tri_neighbors[t][k] = it->second.first;
          m.tri_neighbors[it->second.first][it->second.second] = static_cast<int>(t);
        }
      }
    }
  }
  m.node_to_tri.assign(m.n_fine(), -1);
  for (size_t t = 0; t < m.tris.size(); ++t)
    for (int k = 0; k < 3; ++k)
      if (m.node_to_tri[m.tris[t][k]] < 0) m.node_to_tri[m.tris[t][k]] = static_cast<int>(t);

  return m;
}

double tri_area(const std::vector<Vec2>& xy, const Tri& t) {
  const Vec2 a = xy[t[0]], b = xy[t[1]], c = xy[t[2]];
  return 0.5 * ((b.z - a.z) * (c.r - a.r) - (c.z - a.z) * (b.r - a.r));
}

void tri_grads(const std::vector<Vec2>& xy, const Tri& t, std::array<Eigen::Vector2d, 3>& grad,
               double& area) {
  const Vec2 a = xy[t[0]], b = xy[t[1]], c = xy[t[2]];
  area = tri_area(xy, t);
  const double inv2A = 1.0 / (2.0 * area);
  grad[0] = {(b.r - c.r) * inv2A, (c.z - b.z) * inv2A};
  grad[1] = {(c.r - a.r) * inv2A, (a.z - c.z) * inv2A};
  grad[2] = {(a.r - b.r) * inv2A, (b.z - a.z) * inv2A};
}

SpMat assemble_mass(const Mesh& mesh, const std::vector<Vec2>& xy) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(mesh.tris.size() * 9);
  for (const Tri& t : mesh.tris) {
    const double A = tri_area(xy, t);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) trip.emplace_back(t[a], t[b], (a == b ? A / 6.0 : A / 12.0));
  }
  SpMat M(mesh.n_fine(), mesh.n_fine());
  M.setFromTriplets(trip.begin(), trip.end());
  return M;
}

SpMat assemble_stiffness(const Mesh& mesh, const std::vector<Vec2>& xy) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(mesh.tris.size() * 9);
  std::array<Eigen::Vector2d, 3> g;
  double A;
  for (const Tri& t : mesh.tris) {
    tri_grads(xy, t, g, A);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) trip.emplace_back(t[a], t[b], A * g[a].dot(g[b]));
  }
  SpMat K(mesh.n_fine(), mesh.n_fine());
  K.setFromTriplets(trip.begin(), trip.end());
  return K;
}

SpMat assemble_divergence_fine(const Mesh& mesh, const std::vector<Vec2>& xy) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(mesh.tris.size() * 18);
  std::array<Eigen::Vector2d, 3> g;
  double A;
  for (const Tri& t : mesh.tris) {
    tri_grads(xy, t, g, A);
    for (int i = 0; i < 3; ++i)
      for (int b = 0; b < 3; ++b)
        for (int c = 0; c < 2; ++c) trip.emplace_back(t[i], 2 * t[b] + c, (A / 3.0) * g[b][c]);
  }
  SpMat B(mesh.n_fine(), 2 * mesh.n_fine());
  B.setFromTriplets(trip.begin(), trip.end());
  return B;
}

namespace {

std::array<double, 3> barycentric(const std::vector<Vec2>& xy, const Tri& t, Vec2 p) {
  const Vec2 a = xy[t[0]], b = xy[t[1]], c = xy[t[2]];
  const double det = (b.z - a.z) * (c.r - a.r) - (c.z - a.z) * (b.r - a.r);
  const double l1 = ((p.z - a.z) * (c.r - a.r) - (c.z - a.z) * (p.r - a.r)) / det;
  const double l2 = ((b.z - a.z) * (p.r - a.r) - (p.z - a.z) * (b.r - a.r)) / det;
  return {1.0 - l1 - l2, l1, l2};
}

}  // namespace

LocateResult locate_point(const Mesh& mesh, const std::vector<Vec2>& coords, Vec2 p,
                          int start_tri) {
  constexpr double kTol = -1e-12;
  int tri = (start_tri >= 0 && start_tri < static_cast<int>(mesh.tris.size())) ? start_tri : 0;
  const int max_walk = static_cast<int>(mesh.tris.size()) + 4;
  for (int it = 0; it < max_walk; ++it) {
    const auto bary = barycentric(coords, mesh.tris[tri], p);
    int worst = 0;
    for (int k = 1; k < 3; ++k)
      if (bary[k] < bary[worst]) worst = k;
    if (bary[worst] >= kTol) return {true, tri, bary};
    const int next = mesh.tri_neighbors[tri][worst];
    if (next < 0) break;  // walked off the boundary
    tri = next;
  }
  // Walk failed (boundary hit or cycle on a deformed mesh): global scan.
  for (size_t t = 0; t < mesh.tris.size(); ++t) {
    const auto bary = barycentric(coords, mesh.tris[t], p);
    if (bary[0] >= kTol && bary[1] >= kTol && bary[2] >= kTol)
      return {true, static_cast<int>(t), bary};
  }
  return {};
}

Eigen::Vector2d interp_field(const Mesh& mesh, const Eigen::VectorXd& field,
                             const LocateResult& loc) {
  Eigen::Vector2d v = Eigen::Vector2d::Zero();
  const Tri& t = mesh.tris[loc.tri];
  for (int k = 0; k < 3; ++k) {
    v[0] += loc.bary[k] * field[2 * t[k]];
    v[1] += loc.bary[k] * field[2 * t[k] + 1];
  }
  return v;
}

}  // namespace fsi
