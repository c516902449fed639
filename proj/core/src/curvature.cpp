#include "heisgeo/curvature.hpp"

#include <cmath>
#include <stdexcept>

namespace heisgeo {

namespace {

void require_noncharacteristic(const Surface& S, const Point& p) {
  if (!on_surface(S, p, kMemberTol))
    throw std::domain_error("curvature: point is not on the surface");
  if (is_characteristic(S, p, kCharTol))
    throw std::domain_error("curvature: characteristic point");
}

Eigen::MatrixXd helicoid_nu_derivative(const Point& p) {
  // extension nu = (sin t, -cos t), unit everywhere
  const double x = p.z[0], y = p.z[1], t = p.t;
  Eigen::MatrixXd d(2, 2);
  d(0, 0) = y * std::cos(t);   // Z_1(nu_1)
  d(0, 1) = y * std::sin(t);   // Z_1(nu_2)
  d(1, 0) = -x * std::cos(t);  // Z_2(nu_1)
  d(1, 1) = -x * std::sin(t);  // Z_2(nu_2)
  return d;
}

}  // namespace

Eigen::VectorXd canonical_nu_extension(const Surface& S, const Eigen::VectorXd& ambient) {
  const int rank = 2 * S.n();
  if (ambient.size() != rank + 1)
    throw std::invalid_argument("canonical_nu_extension: ambient point length mismatch");
  if (S.kind() == SurfaceKind::Helicoid) {
    Eigen::VectorXd nu(2);
    nu[0] = std::sin(ambient[2]);
    nu[1] = -std::cos(ambient[2]);
    return nu;
  }
  Eigen::VectorXd r(rank);
  for (int k = 0; k < rank; ++k) r[k] = S.raw_field(k).eval(ambient);
  const double rho = r.norm();
  if (!(rho > 0.0))
    throw std::domain_error("canonical_nu_extension: horizontal normal vanishes");
  return r / rho;
}

Eigen::MatrixXd nu_derivative_matrix(const Surface& S, const Point& p) {
  require_noncharacteristic(S, p);
  if (S.kind() == SurfaceKind::Helicoid) return helicoid_nu_derivative(p);

  const int rank = 2 * S.n();
  const Eigen::VectorXd a = p.ambient();
  Eigen::VectorXd r(rank);
  for (int k = 0; k < rank; ++k) r[k] = S.raw_field(k).eval(a);
  Eigen::MatrixXd A(rank, rank);
  for (int h = 0; h < rank; ++h)
    for (int k = 0; k < rank; ++k) A(h, k) = S.zraw(h, k).eval(a);
  const double rho = r.norm();
  // quotient rule for nu_k = raw_k / |raw|
  Eigen::MatrixXd D(rank, rank);
  const Eigen::VectorXd B = A * r;  // B[h] = sum_m raw_m Z_h(raw_m)
  for (int h = 0; h < rank; ++h)
    for (int k = 0; k < rank; ++k)
      D(h, k) = A(h, k) / rho - r[k] * B[h] / (rho * rho * rho);
  return D;
}

double nu_pair_sum(const Surface& S, const Point& p) {
  const Eigen::MatrixXd D = nu_derivative_matrix(S, p);
  return D.cwiseProduct(D.transpose()).sum();
}

ShapeForm second_fundamental_form(const Surface& S, const Point& p, bool verify) {
  const SurfacePointData data = surface_point_data(S, p);
  if (data.charFlag)
    throw std::domain_error("second_fundamental_form: characteristic point");
  ShapeForm sf;
  sf.basis = horizontal_tangent_basis(S, p);
  sf.TdH = data.TdH;
  const Eigen::MatrixXd D = nu_derivative_matrix(S, p);
  const int m = static_cast<int>(sf.basis.size());
  sf.H_matrix.resize(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      sf.H_matrix(i, j) = sf.basis[i].c.dot(D * sf.basis[j].c);
  if (verify && S.kind() != SurfaceKind::Helicoid) {
    const Eigen::MatrixXd other = shape_matrix_via_connection(S, p, sf.basis);
    if ((other - sf.H_matrix).cwiseAbs().maxCoeff() > 1e-9)
      throw std::logic_error(
          "second_fundamental_form: the two defining expressions disagree");
  }
  return sf;
}

Eigen::MatrixXd shape_matrix_via_connection(const Surface& S, const Point& p,
                                            const std::vector<HVec>& basis) {
  require_noncharacteristic(S, p);
  if (S.kind() == SurfaceKind::Helicoid)
    throw std::domain_error("shape_matrix_via_connection: polynomial kinds only");

  const int n = S.n();
  const int rank = 2 * n;
  const Eigen::VectorXd a = p.ambient();

  Poly rho_sq(2 * n + 1);
  for (int m = 0; m < rank; ++m) rho_sq += S.raw_field(m) * S.raw_field(m);
  const double rho_sq_p = rho_sq.eval(a);
  const Eigen::VectorXd nu = canonical_nu_extension(S, a);

  const int m = static_cast<int>(basis.size());
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m, m);
  for (int j = 0; j < m; ++j) {
    // E_j = |raw|^2 e_j - <e_j, raw> raw: horizontal, tangent along S,
    // and equal to |raw|^2 e_j at p.
    Poly inner(2 * n + 1);
    for (int mm = 0; mm < rank; ++mm)
      if (basis[j].c[mm] != 0.0) inner += S.raw_field(mm) * basis[j].c[mm];
    for (int k = 0; k < rank; ++k) {
      const Poly Ejk = rho_sq * basis[j].c[k] - inner * S.raw_field(k);
      const double dt = Ejk.diff(2 * n).eval(a);
      Eigen::VectorXd zh(rank);  // Z_h(Ejk) at p
      for (int h = 0; h < rank; ++h)
        zh[h] = Ejk.diff(h).eval(a) + (h < n ? p.y(h) : -p.x(h - n)) * dt;
      for (int i = 0; i < m; ++i) H(i, j) += -nu[k] * basis[i].c.dot(zh);
    }
    H.col(j) /= rho_sq_p;
  }
  return H;
}

ShapeForm symmetrize(const ShapeForm& sf) {
  ShapeForm s = sf;
  s.H_matrix = 0.5 * (sf.H_matrix + sf.H_matrix.transpose());
  return s;
}

double norm_h_sq_formula(const Surface& S, const Point& p) {
  const SurfacePointData d = surface_point_data(S, p);
  if (d.charFlag) throw std::domain_error("norm_h_sq_formula: characteristic point");
  return nu_pair_sum(S, p) + 4.0 * (S.n() - 1) * d.TdH * d.TdH;
}

double norm_tilde_h_sq_formula(const Surface& S, const Point& p) {
  const SurfacePointData d = surface_point_data(S, p);
  if (d.charFlag)
    throw std::domain_error("norm_tilde_h_sq_formula: characteristic point");
  return nu_pair_sum(S, p) + 2.0 * (S.n() - 1) * d.TdH * d.TdH;
}

double mean_curvature(const Surface& S, const Point& p) {
  return nu_derivative_matrix(S, p).trace();
}

bool is_htg_at(const Surface& S, const Point& p, double tol) {
  return norm_tilde_h_sq_formula(S, p) < tol * tol;
}

}  // namespace heisgeo
