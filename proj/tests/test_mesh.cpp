#include <doctest.h>

#include <random>

#include "fsi/mesh.hpp"

using namespace fsi;

TEST_CASE("build_mesh node and triangle counts") {
  Mesh m = build_mesh(31, 11, 6.0, 0.5);
  CHECK(m.n_coarse() == 341);
  CHECK(m.nzf == 61);
  CHECK(m.nrf == 21);
  CHECK(m.n_fine() == 1281);
  CHECK(m.tris_coarse.size() == 2 * 30 * 10);
  CHECK(m.tris.size() == 4 * m.tris_coarse.size());

  Mesh tiny = build_mesh(2, 2, 1.0, 1.0);
  CHECK(tiny.n_coarse() == 4);
  CHECK(tiny.tris_coarse.size() == 2);
  CHECK(tiny.tris.size() == 8);
}

TEST_CASE("build_mesh rejects degenerate counts") {
  CHECK_THROWS_AS(build_mesh(1, 5, 1.0, 1.0), MeshError);
  CHECK_THROWS_AS(build_mesh(5, 1, 1.0, 1.0), MeshError);
  CHECK_THROWS_AS(build_mesh(5, 5, 0.0, 1.0), MeshError);
}

TEST_CASE("every coarse node coordinate appears among fine nodes") {
  Mesh m = build_mesh(7, 4, 3.0, 0.8);
  for (int I = 0; I < m.n_coarse(); ++I) {
    const int f = m.coarse_to_fine[I];
    REQUIRE(f >= 0);
    REQUIRE(f < m.n_fine());
  }
  // Prolongation restricted to coarse nodes is the identity.
  Eigen::VectorXd pc = Eigen::VectorXd::Random(m.n_coarse());
  Eigen::VectorXd pf = m.prolong * pc;
  for (int I = 0; I < m.n_coarse(); ++I) CHECK(pf[m.coarse_to_fine[I]] == doctest::Approx(pc[I]));
}

TEST_CASE("prolongation reproduces coarse P1 functions exactly") {
  // An affine function is in the coarse space; its fine interpolant must
  // match pointwise, including the cell-diagonal midpoints.
  Mesh m = build_mesh(6, 5, 2.0, 1.0);
  Eigen::VectorXd pc(m.n_coarse());
  for (int I = 0; I < m.n_coarse(); ++I) {
    const Vec2 x = m.nodes[m.coarse_to_fine[I]];
    pc[I] = 0.3 + 1.7 * x.z - 0.9 * x.r;
  }
  const Eigen::VectorXd pf = m.prolong * pc;
  for (int i = 0; i < m.n_fine(); ++i) {
    const Vec2 x = m.nodes[i];
    CHECK(pf[i] == doctest::Approx(0.3 + 1.7 * x.z - 0.9 * x.r).epsilon(1e-13));
  }
}

TEST_CASE("all triangles positively oriented, boundary tags partition") {
  Mesh m = build_mesh(9, 5, 4.0, 1.0);
  for (const Tri& t : m.tris) CHECK(tri_area(m.nodes, t) > 0.0);
  for (const Tri& t : m.tris_coarse) {
    Tri tf = {m.coarse_to_fine[t[0]], m.coarse_to_fine[t[1]], m.coarse_to_fine[t[2]]};
    CHECK(tri_area(m.nodes, tf) > 0.0);
  }
  std::vector<int> count(m.n_fine(), 0);
  for (int i : m.interface_nodes) ++count[i];
  for (int i : m.axis_nodes) ++count[i];
  for (int i : m.inlet_nodes) ++count[i];
  for (int i : m.outlet_nodes) ++count[i];
  int boundary_nodes = 0;
  for (int j = 0; j < m.nrf; ++j)
    for (int i = 0; i < m.nzf; ++i) {
      const bool onb = (i == 0 || i == m.nzf - 1 || j == 0 || j == m.nrf - 1);
      CHECK(count[m.fine_id(i, j)] == (onb ? 1 : 0));
      boundary_nodes += onb;
    }
  CHECK(static_cast<int>(m.interface_nodes.size() + m.axis_nodes.size() + m.inlet_nodes.size() +
                         m.outlet_nodes.size()) == boundary_nodes);
}

TEST_CASE("point location agrees with barycentric reconstruction") {
  Mesh m = build_mesh(5, 4, 2.0, 1.0);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> uz(0.0, 2.0), ur(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const Vec2 p{uz(rng), ur(rng)};
    const LocateResult loc = locate_point(m, m.nodes, p, static_cast<int>(k % m.tris.size()));
    REQUIRE(loc.inside);
    const Tri& t = m.tris[loc.tri];
    double z = 0, r = 0;
    for (int a = 0; a < 3; ++a) {
      z += loc.bary[a] * m.nodes[t[a]].z;
      r += loc.bary[a] * m.nodes[t[a]].r;
    }
    CHECK(z == doctest::Approx(p.z).epsilon(1e-12));
    CHECK(r == doctest::Approx(p.r).epsilon(1e-12));
  }
  CHECK_FALSE(locate_point(m, m.nodes, {-0.1, 0.5}, 0).inside);
  CHECK_FALSE(locate_point(m, m.nodes, {1.0, 1.2}, 0).inside);
}
