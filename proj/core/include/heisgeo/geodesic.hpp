#pragma once

#include <vector>

#include <Eigen/Core>

#include "heisgeo/surface.hpp"

namespace heisgeo {

/// Doubled first-order state of the reduced geodesic system on an
/// intrinsic Y_1-graph chart: positions (xi, eta~, tau) and velocities
/// (Xi = xi', Eta_dot = eta~'), 4n-1 reals in total.
struct GeodesicState {
  Eigen::VectorXd xi;       // n
  Eigen::VectorXd eta;      // n-1
  double tau = 0.0;
  Eigen::VectorXd Xi;       // n
  Eigen::VectorXd Eta_dot;  // n-1

  int n() const { return static_cast<int>(xi.size()); }
  Eigen::VectorXd chart_point() const;  // (xi, eta~, tau), length 2n
  Eigen::VectorXd flat() const;         // length 4n-1
  static GeodesicState from_flat(int n, const Eigen::VectorXd& f);
};

struct TrajectorySample {
  double s = 0.0;
  GeodesicState state;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  double step = 0.0;
  bool domain_exit = false;  // integration halted at the chart boundary
};

struct LiftedSample {
  double s = 0.0;
  Point p;
  HVec vel;  // horizontal velocity coefficients of the lifted curve
};

/// Chart velocity (xi', eta~', tau') with tau' substituted from the
/// horizontality constraint tau' = 2 alpha xi_1' + sum eta_j xi_j' -
/// sum xi_j eta_j'.
Eigen::VectorXd chart_velocity(const Poly& phi, const GeodesicState& st);

/// M = 2 (d phi/d tau) alpha' xi_1' + <D^2 phi v, v> with
/// alpha' = <v, D phi>; `vel` is the full chart velocity (tau'
/// already substituted).
double m_term(const Poly& phi, const Eigen::VectorXd& q, const Eigen::VectorXd& vel);

/// Right-hand side of the reduced first-order system, as the derivative
/// of the flat state.
Eigen::VectorXd geodesic_rhs(const Poly& phi, const GeodesicState& st);

/// Builds the chart initial state from a graph point p and a horizontal
/// tangent direction w; rejects non-tangent w and verifies that the
/// derived alpha'(0) reproduces w_{n+1} to 1e-9.
GeodesicState initial_state(const Surface& S, const Point& p, const HVec& w);

/// Classical fixed-step RK4. Halts with a domain-exit marker if the
/// chart point leaves the domain box; non-finite states are fatal.
Trajectory integrate(const Surface& S, const GeodesicState& s0, double step,
                     int n_steps);

/// Pointwise Psi-lift of a chart trajectory with the lifted horizontal
/// velocity (xi', alpha', eta~') attached.
std::vector<LiftedSample> lift_trajectory(const Poly& phi, const Trajectory& traj);

/// True iff all horizontal velocity components stay within tol of their
/// means and each point equals start . delta_s(mean velocity) within tol.
bool is_horizontal_line(const std::vector<LiftedSample>& curve, double tol);

}  // namespace heisgeo
