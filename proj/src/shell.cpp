#include "fsi/shell.hpp"

#include <Eigen/SparseLU>
#include <cmath>

#include "fsi/ale.hpp"

namespace fsi {

void WallParams::validate() const {
  if (!(E > 0.0)) throw ParameterError("wall: Young's modulus must be positive");
  if (!(sigma >= 0.0 && sigma < 1.0)) throw ParameterError("wall: Poisson ratio must be in [0,1)");
  if (Cv < 0.0 || Dv < 0.0) throw ParameterError("wall: structural viscosities must be >= 0");
  if (!(rho_s > 0.0)) throw ParameterError("wall: density must be positive");
  if (!(h > 0.0)) throw ParameterError("wall: thickness must be positive");
  if (!(R > 0.0)) throw ParameterError("wall: radius must be positive");
  if (!(h / R < 1.0)) throw ParameterError("wall: thin-shell assumption h/R < 1 violated");
}

KoiterCoefficients koiter_coefficients(const WallParams& w) {
  w.validate();
  const double E = w.E, s = w.sigma, h = w.h, R = w.R;
  const double one_m_s2 = 1.0 - s * s;
  const double thick = 1.0 + h * h / (12.0 * R * R);
  KoiterCoefficients c;
  c.C0 = h * E / (R * R * one_m_s2) * thick;
  c.C1 = (h * h * h / 6.0) * E * s / (R * R * one_m_s2);
  c.C2 = (h / R) * E * s / one_m_s2;
  c.C3 = h * E / one_m_s2;
  c.C4 = (h * h * h / 12.0) * E / one_m_s2;
  c.D0 = (h / (R * R)) * w.Cv * thick;
  c.D1 = (h * h * h / 6.0) * w.Dv / (R * R);
  c.D2 = h * w.Dv / R;
  c.D3 = h * w.Cv;
  c.D4 = (h * h * h / 12.0) * w.Cv;
  return c;
}

KoiterCoefficients formaggia_coefficients(const FormaggiaParams& f, const WallParams& w) {
  w.validate();
  if (!(f.k > 0.0)) throw ParameterError("formaggia: shear correction factor must be positive");
  if (!(f.G > 0.0)) throw ParameterError("formaggia: shear modulus must be positive");
  if (f.gamma < 0.0) throw ParameterError("formaggia: viscosity must be >= 0");
  KoiterCoefficients c;
  c.C0 = w.E * w.h / (w.R * w.R * (1.0 - w.sigma * w.sigma));
  c.C1 = f.k * f.G * w.h;
  c.D1 = f.gamma;
  return c;
}

ShellState ShellState::rest(int n) {
  ShellState s;
  s.eta_z = Eigen::VectorXd::Zero(n);
  s.eta_r = Eigen::VectorXd::Zero(n);
  s.zeta_z = Eigen::VectorXd::Zero(n);
  s.zeta_r = Eigen::VectorXd::Zero(n);
  return s;
}

namespace {

// Element integrals on [z_a, z_b] for P1 hats: mass, stiffness, and the
// first-derivative pairing int phi_b' phi_a dz.
struct Elem1d {
  double m[2][2];
  double k[2][2];
  double b[2][2];  // b[a][b] = int phi_b' phi_a
};

Elem1d elem1d(double len) {
  Elem1d e;
  e.m[0][0] = e.m[1][1] = len / 3.0;
  e.m[0][1] = e.m[1][0] = len / 6.0;
  e.k[0][0] = e.k[1][1] = 1.0 / len;
  e.k[0][1] = e.k[1][0] = -1.0 / len;
  // phi_0' = -1/len, phi_1' = +1/len; int phi_a = len/2.
  e.b[0][0] = -0.5;
  e.b[0][1] = 0.5;
  e.b[1][0] = -0.5;
  e.b[1][1] = 0.5;
  return e;
}

}  // namespace

ShellOperators assemble_shell_operators(const KoiterCoefficients& c, const WallGrid& grid,
                                        ShellBc bc, double rho_s_h, bool radial_only) {
  const int n = grid.n();
  if (n < 3) throw MeshError("shell: wall grid needs at least 3 nodes");
  for (double v : {c.C0, c.C1, c.C2, c.C3, c.D0, c.D1, c.D2, c.D3})
    if (!std::isfinite(v)) throw ParameterError("shell: non-finite coefficient");
  if (!(rho_s_h > 0.0)) throw ParameterError("shell: rho_s h must be positive");

  ShellOperators ops;
  ops.grid = grid;
  ops.bc = bc;
  ops.radial_only = radial_only;
  ops.rho_s_h = rho_s_h;
  ops.wave_speed = std::sqrt(c.C1 / rho_s_h);

  std::vector<Eigen::Triplet<double>> tm, te, tv;
  for (int e = 0; e + 1 < n; ++e) {
    const double len = grid.z[e + 1] - grid.z[e];
    const Elem1d el = elem1d(len);
    const int idx[2] = {e, e + 1};
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        const int ia = idx[a], ib = idx[b];
        tm.emplace_back(ia, ib, el.m[a][b]);
        // z block: C3 stiffness; r block: C0 mass + C1 stiffness.
        te.emplace_back(ia, ib, c.C3 * el.k[a][b]);
        te.emplace_back(n + ia, n + ib, c.C0 * el.m[a][b] + c.C1 * el.k[a][b]);
        tv.emplace_back(ia, ib, c.D3 * el.k[a][b]);
        tv.emplace_back(n + ia, n + ib, c.D0 * el.m[a][b] + c.D1 * el.k[a][b]);
        // Symmetric coupling: C2 [(eta_r, xi_z') + (eta_z', xi_r)].
        // (eta_r, xi_z') = int phi_b phi_a' = b[b][a] by symmetry of the table.
        te.emplace_back(ia, n + ib, c.C2 * el.b[b][a]);
        te.emplace_back(n + ia, ib, c.C2 * el.b[a][b]);
        tv.emplace_back(ia, n + ib, c.D2 * el.b[b][a]);
        tv.emplace_back(n + ia, ib, c.D2 * el.b[a][b]);
      }
  }
  ops.M1.resize(n, n);
  ops.M1.setFromTriplets(tm.begin(), tm.end());
  ops.Ms = rho_s_h * ops.M1;
  ops.Ke.resize(2 * n, 2 * n);
  ops.Ke.setFromTriplets(te.begin(), te.end());
  ops.Kv.resize(2 * n, 2 * n);
  ops.Kv.setFromTriplets(tv.begin(), tv.end());
  return ops;
}

SpMat assemble_coupling(const WallGrid& grid, const Eigen::VectorXd& coeff) {
  const int n = grid.n();
  std::vector<Eigen::Triplet<double>> trip;
  for (int e = 0; e + 1 < n; ++e) {
    const double len = grid.z[e + 1] - grid.z[e];
    const int idx[2] = {e, e + 1};
    // int_e c(z) phi_b'(z) phi_a(z) dz with c linear: phi_b' is constant,
    // int c phi_a = len (c_a/3 + c_other/6).
    const double ca = coeff[idx[0]], cb = coeff[idx[1]];
    const double db[2] = {-1.0 / len, 1.0 / len};
    for (int a = 0; a < 2; ++a) {
      const double wcell = len * ((a == 0 ? ca : cb) / 3.0 + (a == 0 ? cb : ca) / 6.0);
      for (int b = 0; b < 2; ++b) {
        const double val = db[b] * wcell;
        trip.emplace_back(idx[a], n + idx[b], -val);  // z rows: -c eta_r'
        trip.emplace_back(n + idx[a], idx[b], val);   // r rows: +c eta_z'
      }
    }
  }
  SpMat B(2 * n, 2 * n);
  B.setFromTriplets(trip.begin(), trip.end());
  return B;
}

ShellState step3_solve(const ShellState& state, const Eigen::VectorXd& p_trace,
                       const InterfaceGeometry& /*geom frozen at t^n*/, const ShellOperators& ops,
                       double beta, double dt) {
  if (!(dt > 0.0)) throw StepError("step3: time step must be positive");
  const int n = ops.grid.n();
  const double idt2 = ops.rho_s_h / (dt * dt);

  // Backward Euler on (eta, zeta) with zeta eliminated:
  //   (Ms/dt^2 + Ke + B(-beta p)) eta^{n+1} = Ms (eta^n + dt zeta*)/dt^2 + F.
  SpMat S = ops.Ke + assemble_coupling(ops.grid, (-beta) * p_trace);
  {
    std::vector<Eigen::Triplet<double>> tm;
    for (int k = 0; k < ops.M1.outerSize(); ++k)
      for (SpMat::InnerIterator it(ops.M1, k); it; ++it) {
        tm.emplace_back(it.row(), it.col(), idt2 * it.value());
        tm.emplace_back(n + it.row(), n + it.col(), idt2 * it.value());
      }
    SpMat Mblk(2 * n, 2 * n);
    Mblk.setFromTriplets(tm.begin(), tm.end());
    S += Mblk;
  }

  Eigen::VectorXd rhs(2 * n);
  rhs.head(n) = idt2 * (ops.M1 * (state.eta_z + dt * state.zeta_z));
  rhs.tail(n) = idt2 * (ops.M1 * (state.eta_r + dt * state.zeta_r));
  rhs.tail(n) += beta * (ops.M1 * p_trace);  // radial forcing beta p

  // Boundary conditions. eta_z endpoints are clamped in every mode. Clamped
  // runs also pin the eta_r endpoints; absorbing runs replace the eta_r
  // endpoint rows with the characteristic equations
  //   d(eta_r)/dt -+ c d(eta_r)/dz = 0,
  // discretized first-order upwind in time, one-sided in space, implicit.
  std::vector<char> is_bc(2 * n, 0);
  is_bc[0] = is_bc[n - 1] = 1;
  if (ops.radial_only)
    for (int i = 0; i < n; ++i) is_bc[i] = 1;
  if (ops.bc == ShellBc::clamped) is_bc[n] = is_bc[2 * n - 1] = 1;
  const bool absorbing = ops.bc == ShellBc::absorbing;

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(S.nonZeros() + 8);
  for (int k = 0; k < S.outerSize(); ++k)
    for (SpMat::InnerIterator it(S, k); it; ++it) {
      const int r = static_cast<int>(it.row());
      if (is_bc[r] || (absorbing && (r == n || r == 2 * n - 1))) continue;
      trip.emplace_back(r, it.col(), it.value());
    }
  for (int d = 0; d < 2 * n; ++d) {
    if (is_bc[d]) {
      trip.emplace_back(d, d, 1.0);
      rhs[d] = 0.0;
    }
  }
  if (absorbing) {
    const double c = ops.wave_speed;
    const double dz0 = ops.grid.z[1] - ops.grid.z[0];
    const double dzN = ops.grid.z[n - 1] - ops.grid.z[n - 2];
    trip.emplace_back(n, n, 1.0 / dt + c / dz0);
    trip.emplace_back(n, n + 1, -c / dz0);
    rhs[n] = state.eta_r[0] / dt;
    trip.emplace_back(2 * n - 1, 2 * n - 1, 1.0 / dt + c / dzN);
    trip.emplace_back(2 * n - 1, 2 * n - 2, -c / dzN);
    rhs[2 * n - 1] = state.eta_r[n - 1] / dt;
  }

  SpMat A(2 * n, 2 * n);
  A.setFromTriplets(trip.begin(), trip.end());
  Eigen::SparseLU<SpMat> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) throw StepError("step3: singular elastodynamics system");
  const Eigen::VectorXd x = lu.solve(rhs);

  ShellState out;
  out.eta_z = x.head(n);
  out.eta_r = x.tail(n);
  out.zeta_z = (out.eta_z - state.eta_z) / dt;
  out.zeta_r = (out.eta_r - state.eta_r) / dt;
  return out;
}

namespace {

// 2-point Gauss on each element, exact for the quadratic integrands below.
template <class F>
double integrate(const WallGrid& g, F&& f) {
  constexpr double gp = 0.5773502691896257;
  double total = 0.0;
  for (int e = 0; e + 1 < g.n(); ++e) {
    const double za = g.z[e], zb = g.z[e + 1];
    const double mid = 0.5 * (za + zb), half = 0.5 * (zb - za);
    total += half * (f(e, mid - half * gp) + f(e, mid + half * gp));
  }
  return total;
}

struct P1Field {
  const WallGrid& g;
  const Eigen::VectorXd& v;
  double value(int e, double z) const {
    const double za = g.z[e], zb = g.z[e + 1];
    const double t = (z - za) / (zb - za);
    return (1.0 - t) * v[e] + t * v[e + 1];
  }
  double deriv(int e) const { return (v[e + 1] - v[e]) / (g.z[e + 1] - g.z[e]); }
};

}  // namespace

ShellEnergy shell_energy(const ShellState& state, const WallParams& w, const WallGrid& grid) {
  const P1Field ez{grid, state.eta_z}, er{grid, state.eta_r};
  const P1Field zz{grid, state.zeta_z}, zr{grid, state.zeta_r};
  const double R = w.R, h = w.h;
  // Elastic moduli of the energy identity; viscous counterparts expressed
  // through Cv, Dv (E_v/(1+sigma_v) = Cv - Dv).
  const double ae = w.E / (1.0 + w.sigma);
  const double be = w.E * w.sigma / (1.0 - w.sigma * w.sigma);
  const double av = w.Cv - w.Dv;
  const double bv = w.Dv;

  ShellEnergy en;
  en.kinetic = 0.5 * w.rho_s * h *
               integrate(grid, [&](int e, double z) {
                 const double a = zz.value(e, z), b = zr.value(e, z);
                 return a * a + b * b;
               });
  en.membrane_elastic =
      0.5 * h * integrate(grid, [&](int e, double z) {
        const double mzz = ez.deriv(e), mrr = er.value(e, z) / R;
        return ae * (mrr * mrr + mzz * mzz) + be * (mzz + mrr) * (mzz + mrr);
      });
  // P1 interpolants have no second derivative; only the eta_r/R^2 flexural
  // terms survive, and ae + be = E/(1-sigma^2).
  en.flexural_elastic = (h * h * h / 24.0) * (ae + be) / (R * R * R * R) *
                        integrate(grid, [&](int e, double z) {
                          const double v = er.value(e, z);
                          return v * v;
                        });
  en.membrane_viscous_rate =
      0.5 * h * integrate(grid, [&](int e, double z) {
        const double mzz = zz.deriv(e), mrr = zr.value(e, z) / R;
        return av * (mrr * mrr + mzz * mzz) + bv * (mzz + mrr) * (mzz + mrr);
      });
  en.flexural_viscous_rate = (h * h * h / 24.0) * w.Cv / (R * R * R * R) *
                             integrate(grid, [&](int e, double z) {
                               const double v = zr.value(e, z);
                               return v * v;
                             });
  return en;
}

}  // namespace fsi
