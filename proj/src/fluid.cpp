#include "fsi/fluid.hpp"

#include <algorithm>
#include <cmath>

namespace fsi {

void FluidParams::validate() const {
  if (!(rho_f > 0.0)) throw ParameterError("fluid: density must be positive");
  if (!(mu > 0.0)) throw ParameterError("fluid: viscosity must be positive");
}

FluidState FluidState::rest(const Mesh& mesh) {
  FluidState s;
  s.u = Eigen::VectorXd::Zero(2 * mesh.n_fine());
  s.p = Eigen::VectorXd::Zero(mesh.n_coarse());
  return s;
}

double inlet_pressure_pulse(double t, double p_max, double t_max) {
  if (t < 0.0) throw ParameterError("pressure pulse: t must be >= 0");
  if (t > t_max) return 0.0;
  return 0.5 * p_max * (1.0 - std::cos(2.0 * M_PI * t / t_max));
}

BoundaryData BoundaryData::pulse(double p_max, double t_max) {
  BoundaryData b;
  b.kind = Kind::pulse;
  b.p_max = p_max;
  b.t_max = t_max;
  return b;
}

BoundaryData BoundaryData::constant(double p_in, double p_out) {
  BoundaryData b;
  b.kind = Kind::constant;
  b.p_in_const = p_in;
  b.p_out_const = p_out;
  return b;
}

void BoundaryData::validate() const {
  if (kind != Kind::waveform) return;
  if (sample_t.size() < 2 || sample_t.size() != sample_p.size())
    throw DataError("waveform: need matching t/p samples");
  if (!(period > 0.0) || sample_t.back() >= period || sample_t.front() < 0.0)
    throw DataError("waveform: samples must lie in [0, period)");
  for (size_t i = 1; i < sample_t.size(); ++i)
    if (!(sample_t[i] > sample_t[i - 1]))
      throw DataError("waveform: samples must be strictly increasing in time");
}

double BoundaryData::waveform_value(double t) const {
  double tau = std::fmod(t, period);
  if (tau < 0.0) tau += period;
  // Periodic linear interpolation; the gap [t_last, period) wraps to the
  // first sample, which keeps the extension continuous.
  const size_t n = sample_t.size();
  if (tau < sample_t.front() || tau >= sample_t.back()) {
    const double t0 = sample_t.back(), t1 = sample_t.front() + period;
    double x = (tau >= sample_t.back()) ? tau : tau + period;
    const double w = (x - t0) / (t1 - t0);
    return (1.0 - w) * sample_p.back() + w * sample_p.front();
  }
  const auto it = std::upper_bound(sample_t.begin(), sample_t.end(), tau);
  const size_t i = static_cast<size_t>(it - sample_t.begin());
  const double w = (tau - sample_t[i - 1]) / (sample_t[i] - sample_t[i - 1]);
  return (1.0 - w) * sample_p[i - 1] + w * sample_p[i];
}

double BoundaryData::p_in(double t) const {
  switch (kind) {
    case Kind::pulse:
      return inlet_pressure_pulse(t, p_max, t_max);
    case Kind::waveform:
      return waveform_value(t) + mean_drop;
    case Kind::constant:
      return p_in_const;
  }
  return 0.0;
}

double BoundaryData::p_out(double t) const {
  switch (kind) {
    case Kind::pulse:
      return 0.0;
    case Kind::waveform:
      return waveform_value(t);
    case Kind::constant:
      return p_out_const;
  }
  return 0.0;
}

StokesSolver::StokesSolver(const Mesh& mesh, const ShellOperators& ops, const FluidParams& fp)
    : mesh_(&mesh), ops_(&ops), fp_(fp) {
  fp_.validate();
  nv_ = 2 * mesh.n_fine();
  np_ = mesh.n_coarse();
  ndof_ = nv_ + np_;

  // Essential velocity conditions: u_r = 0 on the symmetry axis, u = 0 at the
  // clamped top corners, and u_z = 0 along the whole interface for the
  // radial-only structure model.
  is_dirichlet_.assign(nv_, 0);
  for (int i : mesh.axis_nodes) is_dirichlet_[2 * i + 1] = 1;
  const int cl = mesh.interface_nodes.front(), cr = mesh.interface_nodes.back();
  for (int c : {cl, cr}) {
    is_dirichlet_[2 * c] = 1;
    is_dirichlet_[2 * c + 1] = 1;
  }
  if (ops.radial_only)
    for (int i : mesh.interface_nodes) is_dirichlet_[2 * i] = 1;
  for (int d = 0; d < nv_; ++d)
    if (is_dirichlet_[d]) dirichlet_.push_back(d);
}

void StokesSolver::gather_triplets(const FluidState& state, const std::vector<Vec2>& coords,
                                   const InterfaceGeometry& geom, const Eigen::VectorXd& p_trace,
                                   double p_in, double p_out, double beta, double dt,
                                   std::vector<Eigen::Triplet<double>>& trip,
                                   Eigen::VectorXd& rhs) const {
  const Mesh& mesh = *mesh_;
  const double rho = fp_.rho_f, mu = fp_.mu;
  rhs.setZero(ndof_);
  Eigen::VectorXd mass_rhs = Eigen::VectorXd::Zero(nv_);  // (mass/dt) u^n

  auto push = [&](int r, int c, double v) {
    if (r < nv_ && is_dirichlet_[r]) return;
    trip.emplace_back(r, c, v);
  };

  // Fluid momentum: rho/dt mass + 2 mu D(u):D(v), and the divergence pairing
  // against the fine-node pressure shadow (prolongation applied afterwards).
  std::array<Eigen::Vector2d, 3> g;
  double A;
  std::vector<Eigen::Triplet<double>> bfine;
  bfine.reserve(mesh.tris.size() * 18);
  for (const Tri& t : mesh.tris) {
    tri_grads(coords, t, g, A);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        const double m = rho / dt * (a == b ? A / 6.0 : A / 12.0);
        const double gg = g[a].dot(g[b]);
        for (int c = 0; c < 2; ++c) {
          for (int d = 0; d < 2; ++d) {
            double v = mu * A * g[a][d] * g[b][c];
            if (c == d) v += mu * A * gg + m;
            push(2 * t[a] + c, 2 * t[b] + d, v);
            if (c == d) {
              mass_rhs[2 * t[a] + c] += m * state.u[2 * t[b] + d];
            }
          }
        }
      }
    for (int i = 0; i < 3; ++i)
      for (int b = 0; b < 3; ++b)
        for (int c = 0; c < 2; ++c) bfine.emplace_back(t[i], 2 * t[b] + c, (A / 3.0) * g[b][c]);
  }

  // Continuity rows and pressure-gradient columns through the iso-P2
  // prolongation: B = P^T B_fine.
  {
    SpMat Bf(mesh.n_fine(), nv_);
    Bf.setFromTriplets(bfine.begin(), bfine.end());
    SpMat B = mesh.prolong.transpose() * Bf;
    for (int k = 0; k < B.outerSize(); ++k)
      for (SpMat::InnerIterator it(B, k); it; ++it) {
        push(nv_ + it.row(), it.col(), it.value());   // (q, div u)
        push(it.col(), nv_ + it.row(), -it.value());  // -(p, div v)
      }
  }

  // Interface structure terms on the wall grid: rho_s h / dt inertia plus the
  // viscous stiffness, acting on the shared interface velocity DOFs.
  const auto& iface = mesh.interface_nodes;
  const int n = static_cast<int>(iface.size());
  const SpMat& M1 = ops_->M1;
  for (int k = 0; k < M1.outerSize(); ++k)
    for (SpMat::InnerIterator it(M1, k); it; ++it) {
      const double m = ops_->rho_s_h / dt * it.value();
      for (int c = 0; c < 2; ++c) {
        const int r = 2 * iface[it.row()] + c, cc = 2 * iface[it.col()] + c;
        push(r, cc, m);
        mass_rhs[r] += m * state.u[cc];
      }
    }
  const SpMat& Kv = ops_->Kv;
  for (int k = 0; k < Kv.outerSize(); ++k)
    for (SpMat::InnerIterator it(Kv, k); it; ++it) {
      const int rl = static_cast<int>(it.row()), cl = static_cast<int>(it.col());
      const int r = 2 * iface[rl % n] + (rl < n ? 0 : 1);
      const int c = 2 * iface[cl % n] + (cl < n ? 0 : 1);
      push(r, c, it.value());
    }

  // Explicit Part-I load: -beta int_Gamma J p^n (n^n . xi) dz.
  {
    Eigen::VectorXd fz(n), fr(n);
    for (int k = 0; k < n; ++k) {
      const double jp = geom.jacobian[k] * p_trace[k];
      fz[k] = jp * geom.normal[k].z;
      fr[k] = jp * geom.normal[k].r;
    }
    const Eigen::VectorXd lz = M1 * fz, lr = M1 * fr;
    for (int k = 0; k < n; ++k) {
      rhs[2 * iface[k]] -= beta * lz[k];
      rhs[2 * iface[k] + 1] -= beta * lr[k];
    }
  }

  // Inlet/outlet normal stress, imposed weakly: -p_in/out int n . v over the
  // current boundary edges (counterclockwise; outward normal on the right).
  auto traction = [&](const std::vector<std::array<int, 2>>& edges, double pval) {
    for (const auto& e : edges) {
      const Vec2 a = coords[e[0]], b = coords[e[1]];
      const Vec2 tan = b - a;
      const double len = std::sqrt(tan.z * tan.z + tan.r * tan.r);
      const Vec2 nrm = {tan.r / len, -tan.z / len};
      for (int end : {0, 1}) {
        rhs[2 * e[end]] += -pval * nrm.z * 0.5 * len;
        rhs[2 * e[end] + 1] += -pval * nrm.r * 0.5 * len;
      }
    }
  };
  traction(mesh.inlet_edges, p_in);
  traction(mesh.outlet_edges, p_out);

  rhs.head(nv_) += mass_rhs;

  // Dirichlet rows.
  for (int d : dirichlet_) {
    trip.emplace_back(d, d, 1.0);
    rhs[d] = 0.0;
  }
}

FluidState StokesSolver::solve(const FluidState& state, const std::vector<Vec2>& coords,
                               const InterfaceGeometry& geom, const Eigen::VectorXd& p_trace,
                               double p_in, double p_out, double beta, double dt) {
  if (!(dt > 0.0)) throw StepError("step1: time step must be positive");
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(mesh_->tris.size() * 36 + 4 * ops_->Kv.nonZeros());
  Eigen::VectorXd rhs;
  gather_triplets(state, coords, geom, p_trace, p_in, p_out, beta, dt, trip, rhs);

  SpMat A(ndof_, ndof_);
  A.setFromTriplets(trip.begin(), trip.end());
  if (!analyzed_) {
    lu_.analyzePattern(A);
    analyzed_ = true;
  }
  lu_.factorize(A);
  if (lu_.info() != Eigen::Success)
    throw SolverError("step1: saddle-point factorization failed (" + lu_.lastErrorMessage() + ")");
  const Eigen::VectorXd x = lu_.solve(rhs);

  FluidState out;
  out.u = x.head(nv_);
  out.p = x.tail(np_);
  return out;
}

double StokesSolver::divergence_residual(const Eigen::VectorXd& u,
                                         const std::vector<Vec2>& coords) const {
  const SpMat Bf = assemble_divergence_fine(*mesh_, coords);
  const Eigen::VectorXd r = mesh_->prolong.transpose() * (Bf * u);
  return r.lpNorm<Eigen::Infinity>();
}

Eigen::VectorXd advect_characteristics(const Mesh& mesh, const std::vector<Vec2>& coords,
                                       const Eigen::VectorXd& field, const Eigen::VectorXd& advect,
                                       double dt, const std::vector<char>& frozen,
                                       int max_substeps) {
  const int N = mesh.n_fine();
  double amax = 0.0;
  for (int i = 0; i < N; ++i)
    amax = std::max(amax, std::hypot(advect[2 * i], advect[2 * i + 1]));

  double edge_min = std::numeric_limits<double>::max();
  for (const Tri& t : mesh.tris)
    for (int k = 0; k < 3; ++k) {
      const Vec2 d = coords[t[k]] - coords[t[(k + 1) % 3]];
      edge_min = std::min(edge_min, std::hypot(d.z, d.r));
    }

  int m = 1;
  if (amax > 0.0) m = std::max(1, static_cast<int>(std::ceil(amax * dt / (0.45 * edge_min))));
  if (m > max_substeps) throw StepError("step2: sub-step count exceeds cap (CFL violation)");
  const double sub = dt / m;

  Eigen::VectorXd out(2 * N);
  for (int i = 0; i < N; ++i) {
    if (frozen[i]) {
      out[2 * i] = field[2 * i];
      out[2 * i + 1] = field[2 * i + 1];
      continue;
    }
    Vec2 x = coords[i];
    int tri = mesh.node_to_tri[i];
    LocateResult loc{true, tri, {}};
    for (int s = 0; s < m; ++s) {
      const LocateResult here = locate_point(mesh, coords, x, tri);
      if (!here.inside) break;  // clamped to the boundary on a previous sub-step
      loc = here;
      tri = here.tri;
      const Eigen::Vector2d a = interp_field(mesh, advect, here);
      Vec2 target = {x.z - sub * a[0], x.r - sub * a[1]};
      LocateResult lt = locate_point(mesh, coords, target, tri);
      if (lt.inside) {
        x = target;
        tri = lt.tri;
        loc = lt;
      } else {
        // Backward characteristic leaves through the inflow boundary: bisect
        // to the last interior point and take the boundary value there.
        Vec2 lo = x, hi = target;
        for (int it = 0; it < 50; ++it) {
          const Vec2 mid = 0.5 * (lo + hi);
          const LocateResult lm = locate_point(mesh, coords, mid, tri);
          if (lm.inside) {
            lo = mid;
            tri = lm.tri;
            loc = lm;
          } else {
            hi = mid;
          }
        }
        x = lo;
        break;
      }
    }
    const Eigen::Vector2d v = interp_field(mesh, field, loc);
    out[2 * i] = v[0];
    out[2 * i + 1] = v[1];
  }
  return out;
}

FluidState step2_advect(const FluidState& state, const Eigen::VectorXd& w_z,
                        const Eigen::VectorXd& w_r, const Mesh& mesh,
                        const std::vector<Vec2>& coords, double dt) {
  const int N = mesh.n_fine();
  Eigen::VectorXd a(2 * N);
  for (int i = 0; i < N; ++i) {
    a[2 * i] = state.u[2 * i] - w_z[i];
    a[2 * i + 1] = state.u[2 * i + 1] - w_r[i];
  }
  std::vector<char> frozen(N, 0);
  for (int i : mesh.interface_nodes) frozen[i] = 1;
  FluidState out;
  out.u = advect_characteristics(mesh, coords, state.u, a, dt, frozen);
  out.p = state.p;
  return out;
}

}  // namespace fsi
