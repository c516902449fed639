#include "heisgeo/group.hpp"

#include <stdexcept>

namespace heisgeo {

namespace {

void require_same_n(int a, int b, const char* what) {
  if (a != b) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

}  // namespace

Dimension::Dimension(int n) : n_(n) {
  if (n < 1) throw std::invalid_argument("Dimension: n must be >= 1");
}

Point::Point(Eigen::VectorXd z_, double t_) : z(std::move(z_)), t(t_) {
  if (z.size() == 0 || z.size() % 2 != 0)
    throw std::invalid_argument("Point: z must have even positive length 2n");
}

Eigen::VectorXd Point::ambient() const {
  Eigen::VectorXd a(z.size() + 1);
  a.head(z.size()) = z;
  a[z.size()] = t;
  return a;
}

Point Point::origin(int n) {
  return Point(Eigen::VectorXd::Zero(2 * n), 0.0);
}

Point Point::from_ambient(const Eigen::VectorXd& a) {
  if (a.size() < 3 || a.size() % 2 == 0)
    throw std::invalid_argument("Point::from_ambient: length must be 2n+1");
  return Point(a.head(a.size() - 1), a[a.size() - 1]);
}

HVec::HVec(Eigen::VectorXd c_) : c(std::move(c_)) {
  if (c.size() == 0 || c.size() % 2 != 0)
    throw std::invalid_argument("HVec: coefficient vector must have length 2n");
}

HVec HVec::zero(int n) { return HVec(Eigen::VectorXd::Zero(2 * n)); }

BlockRotation::BlockRotation(Eigen::MatrixXd A, Eigen::MatrixXd B)
    : A_(std::move(A)), B_(std::move(B)) {
  const auto n = A_.rows();
  if (A_.cols() != n || B_.rows() != n || B_.cols() != n || n < 1)
    throw std::invalid_argument("BlockRotation: A and B must be square of equal size");
  R_.resize(2 * n, 2 * n);
  R_.topLeftCorner(n, n) = A_;
  R_.topRightCorner(n, n) = B_;
  R_.bottomLeftCorner(n, n) = -B_;
  R_.bottomRightCorner(n, n) = A_;
  const Eigen::MatrixXd gram = R_.transpose() * R_;
  const double defect =
      (gram - Eigen::MatrixXd::Identity(2 * n, 2 * n)).cwiseAbs().maxCoeff();
  if (defect > 1e-12 * std::max(1.0, R_.norm()))
    throw std::invalid_argument("BlockRotation: [[A,B],[-B,A]] is not orthogonal");
}

BlockRotation BlockRotation::identity(int n) {
  return BlockRotation(Eigen::MatrixXd::Identity(n, n), Eigen::MatrixXd::Zero(n, n));
}

double symplectic_q(const Eigen::VectorXd& z, const Eigen::VectorXd& zp) {
  if (z.size() != zp.size() || z.size() % 2 != 0)
    throw std::invalid_argument("symplectic_q: inputs must share even length 2n");
  const int n = static_cast<int>(z.size()) / 2;
  double q = 0.0;
  for (int j = 0; j < n; ++j) q += zp[j] * z[n + j] - z[j] * zp[n + j];
  return q;
}

Point group_mul(const Point& p, const Point& q) {
  require_same_n(p.n(), q.n(), "group_mul");
  return Point(p.z + q.z, p.t + q.t + symplectic_q(p.z, q.z));
}

Point group_inv(const Point& p) { return Point(-p.z, -p.t); }

Point dilate(double lambda, const Point& p) {
  if (!(lambda > 0.0)) throw std::invalid_argument("dilate: lambda must be > 0");
  return Point(lambda * p.z, lambda * lambda * p.t);
}

Point left_translate(const Point& q, const Point& p) { return group_mul(q, p); }

HVec j_apply(const HVec& v) {
  const int n = v.n();
  Eigen::VectorXd r(2 * n);
  r.head(n) = -v.c.tail(n);
  r.tail(n) = v.c.head(n);
  return HVec(r);
}

Eigen::VectorXd frame_vector(int i, const Point& p) {
  const int n = p.n();
  if (i < 0 || i > 2 * n) throw std::out_of_range("frame_vector: index out of range");
  Eigen::VectorXd v = Eigen::VectorXd::Zero(2 * n + 1);
  if (i == 2 * n) {
    v[2 * n] = 1.0;  // T
  } else if (i < n) {
    v[i] = 1.0;
    v[2 * n] = p.y(i);  // X_j = e_j + y_j e_t
  } else {
    v[i] = 1.0;
    v[2 * n] = -p.x(i - n);  // Y_j = e_{n+j} - x_j e_t
  }
  return v;
}

Point pseudoherm_transform(const BlockRotation& R, const Point& p) {
  require_same_n(R.n(), p.n(), "pseudoherm_transform");
  return Point(R.full() * p.z, p.t);
}

HVec rotate(const BlockRotation& R, const HVec& w) {
  require_same_n(R.n(), w.n(), "rotate");
  return HVec(R.full() * w.c);
}

Eigen::VectorXd frame_coefficients(const Eigen::VectorXd& v, const Point& p) {
  const int n = p.n();
  if (v.size() != 2 * n + 1)
    throw std::invalid_argument("frame_coefficients: ambient vector length mismatch");
  Eigen::VectorXd c(2 * n + 1);
  c.head(2 * n) = v.head(2 * n);
  double tcomp = v[2 * n];
  for (int j = 0; j < n; ++j) tcomp += -v[j] * p.y(j) + v[n + j] * p.x(j);
  c[2 * n] = tcomp;
  return c;
}

}  // namespace heisgeo
