#include "heisgeo/geodesic.hpp"

#include <cmath>
#include <stdexcept>

namespace heisgeo {

namespace {

const Poly& require_chart(const Surface& S) {
  if (S.kind() != SurfaceKind::IntrinsicY1)
    throw std::domain_error(
        "geodesic: surface must be given as an intrinsic Y1-graph chart; "
        "re-express the surface in such a chart first");
  return S.intrinsic_phi();
}

}  // namespace

Eigen::VectorXd GeodesicState::chart_point() const {
  const int nn = n();
  Eigen::VectorXd q(2 * nn);
  q.head(nn) = xi;
  q.segment(nn, nn - 1) = eta;
  q[2 * nn - 1] = tau;
  return q;
}

Eigen::VectorXd GeodesicState::flat() const {
  const int nn = n();
  Eigen::VectorXd f(4 * nn - 1);
  f.head(2 * nn) = chart_point();
  f.segment(2 * nn, nn) = Xi;
  f.tail(nn - 1) = Eta_dot;
  return f;
}

GeodesicState GeodesicState::from_flat(int n, const Eigen::VectorXd& f) {
  if (f.size() != 4 * n - 1)
    throw std::invalid_argument("GeodesicState::from_flat: length must be 4n-1");
  GeodesicState st;
  st.xi = f.head(n);
  st.eta = f.segment(n, n - 1);
  st.tau = f[2 * n - 1];
  st.Xi = f.segment(2 * n, n);
  st.Eta_dot = f.tail(n - 1);
  return st;
}

Eigen::VectorXd chart_velocity(const Poly& phi, const GeodesicState& st) {
  const int n = st.n();
  if (phi.nvars() != 2 * n)
    throw std::invalid_argument("chart_velocity: phi/state dimension mismatch");
  const double alpha = phi.eval(st.chart_point());
  double tau_dot = 2.0 * alpha * st.Xi[0];
  for (int j = 0; j < n - 1; ++j)
    tau_dot += st.eta[j] * st.Xi[j + 1] - st.xi[j + 1] * st.Eta_dot[j];
  Eigen::VectorXd vel(2 * n);
  vel.head(n) = st.Xi;
  vel.segment(n, n - 1) = st.Eta_dot;
  vel[2 * n - 1] = tau_dot;
  return vel;
}

double m_term(const Poly& phi, const Eigen::VectorXd& q, const Eigen::VectorXd& vel) {
  if (q.size() != phi.nvars() || vel.size() != phi.nvars())
    throw std::invalid_argument("m_term: dimension mismatch");
  const Jet2 jet = phi.jet2(q);
  const double phi_tau = jet.gradient[phi.nvars() - 1];
  const double alpha_dot = vel.dot(jet.gradient);
  return 2.0 * phi_tau * alpha_dot * vel[0] + vel.dot(jet.hessian * vel);
}

Eigen::VectorXd geodesic_rhs(const Poly& phi, const GeodesicState& st) {
  const int n = st.n();
  if (phi.nvars() != 2 * n)
    throw std::invalid_argument("geodesic_rhs: phi/state dimension mismatch");
  const Eigen::VectorXd q = st.chart_point();
  const Jet2 jet = phi.jet2(q);
  const double phi_tau = jet.gradient[2 * n - 1];
  const double alpha = jet.value;

  // projected gradient (W^phi phi, X~_j phi, Y~_j phi)
  Eigen::VectorXd g(2 * n - 1);
  g[0] = jet.gradient[0] + 2.0 * alpha * phi_tau;
  for (int j = 2; j <= n; ++j) {
    g[j - 1] = jet.gradient[j - 1] + st.eta[j - 2] * phi_tau;
    g[n + j - 2] = jet.gradient[n + j - 2] - st.xi[j - 1] * phi_tau;
  }
  const double w = 1.0 + g.squaredNorm();

  double tau_dot = 2.0 * alpha * st.Xi[0];
  for (int j = 0; j < n - 1; ++j)
    tau_dot += st.eta[j] * st.Xi[j + 1] - st.xi[j + 1] * st.Eta_dot[j];
  Eigen::VectorXd vel(2 * n);
  vel.head(n) = st.Xi;
  vel.segment(n, n - 1) = st.Eta_dot;
  vel[2 * n - 1] = tau_dot;

  const double alpha_dot = vel.dot(jet.gradient);
  const double m = 2.0 * phi_tau * alpha_dot * vel[0] + vel.dot(jet.hessian * vel);

  Eigen::VectorXd deriv(4 * n - 1);
  deriv.head(n) = st.Xi;
  deriv.segment(n, n - 1) = st.Eta_dot;
  deriv[2 * n - 1] = tau_dot;
  deriv[2 * n] = -g[0] * m / w;  // xi_1''
  for (int j = 2; j <= n; ++j) {
    deriv[2 * n + j - 1] = -g[j - 1] * m / w;        // xi_j''
    deriv[3 * n + j - 2] = -g[n + j - 2] * m / w;    // eta_j''
  }
  return deriv;
}

GeodesicState initial_state(const Surface& S, const Point& p, const HVec& w) {
  const Poly& phi = require_chart(S);
  const int n = S.n();
  if (p.n() != n || w.n() != n)
    throw std::invalid_argument("initial_state: dimension mismatch");
  if (!on_surface(S, p, kMemberTol))
    throw std::domain_error("initial_state: point is not on the graph");
  const Eigen::VectorXd q = project_pi(p);
  const HVec nu = intrinsic_normal(phi, q);
  if (std::abs(w.c.dot(nu.c)) > 1e-9 * std::max(1.0, w.norm()))
    throw std::domain_error("initial_state: w is not horizontal-tangent");

  GeodesicState st;
  st.xi = q.head(n);
  st.eta = q.segment(n, n - 1);
  st.tau = q[2 * n - 1];
  st.Xi = w.c.head(n);
  st.Eta_dot = w.c.tail(n - 1);

  // alpha'(0) derived from the frame coefficients must reproduce w_{n+1}
  const Eigen::VectorXd g = intrinsic_gradient(phi, q);
  double alpha_dot = w.c[0] * g[0];
  for (int j = 2; j <= n; ++j)
    alpha_dot += w.c[j - 1] * g[j - 1] + w.c[n + j - 1] * g[n + j - 2];
  if (std::abs(alpha_dot - w.c[n]) > 1e-9)
    throw std::domain_error("initial_state: inconsistent alpha'(0)");
  return st;
}

Trajectory integrate(const Surface& S, const GeodesicState& s0, double step,
                     int n_steps) {
  const Poly& phi = require_chart(S);
  if (!(step > 0.0)) throw std::invalid_argument("integrate: step must be > 0");
  if (n_steps < 0) throw std::invalid_argument("integrate: n_steps must be >= 0");
  const Box& domain = S.chart_domain();
  const int n = S.n();
  if (s0.n() != n) throw std::invalid_argument("integrate: state dimension mismatch");
  if (!domain.contains(s0.chart_point()))
    throw std::domain_error("integrate: initial chart point outside domain");

  Trajectory traj;
  traj.step = step;
  traj.samples.push_back({0.0, s0});
  Eigen::VectorXd y = s0.flat();
  for (int k = 1; k <= n_steps; ++k) {
    const auto f = [&](const Eigen::VectorXd& v) {
      return geodesic_rhs(phi, GeodesicState::from_flat(n, v));
    };
    const Eigen::VectorXd k1 = f(y);
    const Eigen::VectorXd k2 = f(y + 0.5 * step * k1);
    const Eigen::VectorXd k3 = f(y + 0.5 * step * k2);
    const Eigen::VectorXd k4 = f(y + step * k3);
    y += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!y.allFinite())
      throw std::runtime_error("integrate: state became non-finite");
    const GeodesicState st = GeodesicState::from_flat(n, y);
    if (!domain.contains(st.chart_point())) {
      traj.domain_exit = true;
      break;
    }
    traj.samples.push_back({k * step, st});
  }
  return traj;
}

std::vector<LiftedSample> lift_trajectory(const Poly& phi, const Trajectory& traj) {
  std::vector<LiftedSample> out;
  out.reserve(traj.samples.size());
  for (const TrajectorySample& smp : traj.samples) {
    const int n = smp.state.n();
    const Eigen::VectorXd q = smp.state.chart_point();
    const Eigen::VectorXd vel = chart_velocity(phi, smp.state);
    const double alpha_dot = vel.dot(phi.jet2(q).gradient);
    Eigen::VectorXd c(2 * n);
    c.head(n) = smp.state.Xi;
    c[n] = alpha_dot;
    c.tail(n - 1) = smp.state.Eta_dot;
    out.push_back({smp.s, lift_psi(phi, q), HVec(c)});
  }
  return out;
}

bool is_horizontal_line(const std::vector<LiftedSample>& curve, double tol) {
  if (curve.size() < 3)
    throw std::invalid_argument("is_horizontal_line: need at least 3 samples");
  const int rank = static_cast<int>(curve.front().vel.c.size());
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(rank);
  for (const LiftedSample& s : curve) mean += s.vel.c;
  mean /= static_cast<double>(curve.size());

  for (const LiftedSample& s : curve)
    if ((s.vel.c - mean).cwiseAbs().maxCoeff() >= tol) return false;

  // group-law straightness: p(s) = p(0) . (s vbar, 0)
  const Point& start = curve.front().p;
  const double s0 = curve.front().s;
  for (const LiftedSample& s : curve) {
    const Point expected = group_mul(start, Point((s.s - s0) * mean, 0.0));
    if ((expected.ambient() - s.p.ambient()).cwiseAbs().maxCoeff() >= tol)
      return false;
  }
  return true;
}

}  // namespace heisgeo
