#pragma once

#include <Eigen/Core>

namespace heisgeo {

/// Runtime dimension parameter n of H^n. Objects of different dimension
/// never mix implicitly; mismatches are hard errors.
class Dimension {
 public:
  explicit Dimension(int n);
  int n() const { return n_; }
  int ambient() const { return 2 * n_ + 1; }  // coordinate count
  int rank() const { return 2 * n_; }         // horizontal rank

 private:
  int n_;
};

/// Point of H^n in exponential coordinates (x_1..x_n, y_1..y_n, t).
struct Point {
  Eigen::VectorXd z;  // (x_1..x_n, y_1..y_n)
  double t = 0.0;

  Point() = default;
  Point(Eigen::VectorXd z_, double t_);

  int n() const { return static_cast<int>(z.size()) / 2; }
  double x(int j) const { return z[j]; }          // j in [0, n)
  double y(int j) const { return z[n() + j]; }    // j in [0, n)

  Eigen::VectorXd ambient() const;
  static Point origin(int n);
  static Point from_ambient(const Eigen::VectorXd& a);
};

/// Horizontal vector: coefficients over the frame Z_1..Z_2n,
/// i.e. (a_1..a_n, b_1..b_n) for sum a_j X_j + b_j Y_j.
struct HVec {
  Eigen::VectorXd c;

  HVec() = default;
  explicit HVec(Eigen::VectorXd c_);

  int n() const { return static_cast<int>(c.size()) / 2; }
  double norm() const { return c.norm(); }
  static HVec zero(int n);
};

/// Block rotation [[A, B], [-B, A]]; the full 2n x 2n matrix must be
/// orthogonal to 1e-12 relative to its norm.
class BlockRotation {
 public:
  BlockRotation(Eigen::MatrixXd A, Eigen::MatrixXd B);
  static BlockRotation identity(int n);

  int n() const { return static_cast<int>(A_.rows()); }
  const Eigen::MatrixXd& A() const { return A_; }
  const Eigen::MatrixXd& B() const { return B_; }
  const Eigen::MatrixXd& full() const { return R_; }

 private:
  Eigen::MatrixXd A_, B_, R_;
};

/// Q((x,y),(x',y')) = sum_j (x'_j y_j - x_j y'_j).
double symplectic_q(const Eigen::VectorXd& z, const Eigen::VectorXd& zp);

/// Group law (z, t)·(z', t') = (z + z', t + t' + Q(z, z')).
Point group_mul(const Point& p, const Point& q);
Point group_inv(const Point& p);

/// Intrinsic dilation (z, t) -> (lambda z, lambda^2 t), lambda > 0.
Point dilate(double lambda, const Point& p);

/// Left translation tau_q(p) = q·p.
Point left_translate(const Point& q, const Point& p);

/// Complex structure J: (a, b) -> (-b, a).
HVec j_apply(const HVec& v);

/// Euclidean coordinate expression of the frame field Z_i at p,
/// i in [0, 2n]: X_j = e_j + y_j e_t, Y_j = e_{n+j} - x_j e_t, Z_2n = T.
Eigen::VectorXd frame_vector(int i, const Point& p);

/// phi_R(x, y, t) = (R(x, y), t).
Point pseudoherm_transform(const BlockRotation& R, const Point& p);

/// Differential of phi_R on horizontal vectors: w -> R w.
HVec rotate(const BlockRotation& R, const HVec& w);

/// Frame coefficients of an ambient vector v at p: the T coefficient is
/// v_t - sum_j v_j y_j + sum_j v_{n+j} x_j.
Eigen::VectorXd frame_coefficients(const Eigen::VectorXd& v, const Point& p);

}  // namespace heisgeo
