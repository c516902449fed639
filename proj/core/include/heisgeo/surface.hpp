#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "heisgeo/group.hpp"
#include "heisgeo/poly.hpp"

namespace heisgeo {

/// Default absolute threshold on |N^H| below which a point counts as
/// characteristic (|N| = 1 fixes the scale).
inline constexpr double kCharTol = 1e-8;

/// Default absolute tolerance on the defining-polynomial residual for
/// membership checks.
inline constexpr double kMemberTol = 1e-9;

/// Closed axis-aligned box. Evaluation outside a chart domain is an
/// error, not an extrapolation.
struct Box {
  Eigen::VectorXd lo, hi;

  Box() = default;
  Box(Eigen::VectorXd lo_, Eigen::VectorXd hi_);
  static Box cube(int dim, double a, double b);

  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(const Eigen::VectorXd& x, double slack = 0.0) const;
};

enum class SurfaceKind { TGraph, IntrinsicY1, Implicit, Helicoid };

/// Hypersurface of H^n in one of four representations:
///   - t-graph t = u(x, y) with u polynomial,
///   - intrinsic Y_1-graph of a polynomial phi over a box domain,
///   - regular polynomial level set f = 0 over a box region,
///   - the parametric helicoid (r cos theta, r sin theta, theta), n = 1.
///
/// Polynomial representations precompute an ambient defining polynomial F
/// (t-graph: u - t; implicit: f; intrinsic graph: phi(x, y~, t + x1 y1) - y1,
/// which reproduces the intrinsic-graph normal orientation), the frame
/// derivatives Z_k F, and the second derivatives Z_h(Z_k F) used by the
/// curvature module. Surfaces are immutable after construction.
class Surface {
 public:
  static Surface t_graph(int n, Poly u);
  static Surface intrinsic_y1(int n, Poly phi, Box domain);
  static Surface implicit(int n, Poly f, Box region);
  static Surface helicoid();

  // Named builtins.
  static Surface vertical_hyperplane(const Eigen::VectorXd& ab, double c);
  static Surface hyperplane(const Eigen::VectorXd& ab, double c, double d);
  static Surface saddle(int n);

  int n() const { return n_; }
  Dimension dim() const { return Dimension(n_); }
  SurfaceKind kind() const { return kind_; }

  const Poly& defining() const;          // ambient F, polynomial kinds only
  const Poly& raw_field(int k) const;    // Z_k F
  const Poly& zraw(int h, int k) const;  // Z_h(Z_k F)
  const Poly& tgraph_u() const;
  const Poly& intrinsic_phi() const;
  const Box& chart_domain() const;  // intrinsic-graph domain
  const Box& region() const;        // implicit region

  /// Euclidean gradient of the defining function at p (closed form for
  /// the helicoid).
  Eigen::VectorXd defining_gradient(const Point& p) const;
  double grad_scale(const Point& p) const;

 private:
  Surface() = default;
  void finalize_polynomial();  // builds raw_/zraw_ from defining_

  int n_ = 0;
  SurfaceKind kind_ = SurfaceKind::Implicit;
  std::optional<Poly> u_, phi_, defining_;
  std::optional<Box> domain_, region_;
  std::vector<Poly> raw_;   // 2n entries
  std::vector<Poly> zraw_;  // 2n x 2n entries, row-major [h][k]
};

/// Everything the toolkit knows about one surface point: Euclidean unit
/// normal N, horizontal normal N^H (components of N against the frame),
/// the unit horizontal normal where it exists, and Td^H = N_t / |N^H|.
struct SurfacePointData {
  Point p;
  Eigen::VectorXd N;
  HVec NH;
  std::optional<HVec> nuH;
  double TdH = 0.0;  // NaN at characteristic points
  bool charFlag = false;
};

double membership_residual(const Surface& S, const Point& p);
bool on_surface(const Surface& S, const Point& p, double tol = kMemberTol);

Eigen::VectorXd euclidean_normal(const Surface& S, const Point& p);
HVec horizontal_normal_raw(const Surface& S, const Point& p);
bool is_characteristic(const Surface& S, const Point& p, double tol = kCharTol);
SurfacePointData surface_point_data(const Surface& S, const Point& p,
                                    double tol = kCharTol);

/// Orthonormal basis of the horizontal tangent space at a
/// non-characteristic point, deterministic across runs: pivoted
/// Gram-Schmidt on the frame projections, largest norm first, sign fixed
/// so each vector's first nonzero entry is positive.
std::vector<HVec> horizontal_tangent_basis(const Surface& S, const Point& p);

// Intrinsic Y_1-graph machinery. Chart points are q = (xi_1..xi_n,
// eta_2..eta_n, tau) in R^{2n}.

/// Psi(q) = (xi, phi(q), eta~, tau - xi_1 phi(q)).
Point lift_psi(const Poly& phi, const Eigen::VectorXd& q);
Point lift_psi(const Surface& S, const Eigen::VectorXd& q);

/// Pi(x, y, t) = (x, y~, t + x_1 y_1).
Eigen::VectorXd project_pi(const Point& p);

/// The projected gradient (W^phi phi, X~_2 phi, .., X~_n phi,
/// Y~_2 phi, .., Y~_n phi) evaluated at q.
Eigen::VectorXd intrinsic_gradient(const Poly& phi, const Eigen::VectorXd& q);

/// Global horizontal tangent frame of the graph at Psi(q):
/// E_1 = X_1 + (W^phi phi) Y_1, E_j = X_j + (X~_j phi) Y_1,
/// F_j = Y_j + (Y~_j phi) Y_1.
std::vector<HVec> intrinsic_graph_frames(const Poly& phi, const Eigen::VectorXd& q);
std::vector<HVec> intrinsic_graph_frames(const Surface& S, const Eigen::VectorXd& q);

/// Unit horizontal normal of the graph at Psi(q):
/// W^{-1/2} (W^phi phi X_1 + sum X~_j phi X_j - Y_1 + sum Y~_j phi Y_j).
HVec intrinsic_normal(const Poly& phi, const Eigen::VectorXd& q);
HVec intrinsic_normal(const Surface& S, const Eigen::VectorXd& q);

// Exact images of polynomial surfaces under the intrinsic symmetries
// (helicoid is not representable and is rejected).
Surface translate_surface(const Surface& S, const Point& q);
Surface dilate_surface(const Surface& S, double lambda);
Surface rotate_surface(const Surface& S, const BlockRotation& R);

}  // namespace heisgeo
