#pragma once

#include <optional>
#include <string>
#include <vector>

#include "heisgeo/surface.hpp"

namespace heisgeo {

/// Outcome of walking one horizontal tangent ray p . delta_s(w).
/// Residuals are normalized so the defining function has unit gradient
/// norm at the base point.
struct RayVerdict {
  bool stays_within_horizon = true;
  std::optional<double> exit_s;                   // present iff the ray exits
  std::optional<bool> endpoint_characteristic;    // present iff exit_s is
  double max_residual_before_exit = 0.0;
  std::optional<Point> endpoint;                  // last on-surface point
  std::optional<double> endpoint_nh_norm;         // |N^H| there
};

/// Walks s = 0, step, 2 step, ..., s_max; on the first normalized
/// residual above tol, bisects the exit parameter to step * 1e-3
/// precision and classifies the last on-surface point.
RayVerdict ray_scan(const Surface& S, const Point& p, const HVec& w, double s_max,
                    double step, double tol);

struct DirectionReport {
  HVec w;
  RayVerdict forward;
  RayVerdict backward;
};

struct RulingReport {
  bool all_stay = true;
  std::vector<DirectionReport> rays;
};

/// Deterministic low-discrepancy unit directions in the horizontal
/// tangent space at p (Halton points pushed to the sphere).
std::vector<HVec> tangent_directions(const Surface& S, const Point& p, int n_dirs);

/// Scans n_dirs directions (both orientations) with horizon s_probe;
/// true iff every ray stays within tol.
RulingReport local_ruling_check(const Surface& S, const Point& p, int n_dirs,
                                double s_probe, double tol);

struct TransformCase {
  std::string name;  // "translate", "dilate", "rotate"
  RayVerdict base;
  RayVerdict transformed;
  bool verdict_match = false;
  double residual_ratio = 0.0;  // transformed vs base max residual
};

struct InvarianceReport {
  std::vector<TransformCase> cases;
  bool all_match = true;
};

/// Checks that the ray verdict at (p, w) is preserved under tau_q,
/// delta_lambda (with s and step rescaled by lambda) and phi_R, with the
/// direction mapped by the corresponding differential.
InvarianceReport invariance_suite(const Surface& S, const Point& p, const HVec& w,
                                  const Point& q, double lambda,
                                  const BlockRotation& R, double s_max, double step,
                                  double tol);

/// Halton low-discrepancy points pushed through the inverse normal CDF
/// and normalized: deterministic unit vectors on S^{dim-1}.
std::vector<Eigen::VectorXd> sphere_points(int dim, int count);

}  // namespace heisgeo
