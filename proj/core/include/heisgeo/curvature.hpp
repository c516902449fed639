#pragma once

#include <vector>

#include <Eigen/Core>

#include "heisgeo/surface.hpp"

namespace heisgeo {

/// Horizontal second fundamental form at one point: the orthonormal
/// tangent basis used, the matrix of h(e_i, e_j), and Td^H there.
struct ShapeForm {
  std::vector<HVec> basis;
  Eigen::MatrixXd H_matrix;
  double TdH = 0.0;
};

/// Canonical unit extension of nu^H off the surface: the frame
/// derivatives of the defining function, normalized, evaluated at an
/// arbitrary ambient point (2n+1 coordinates).
Eigen::VectorXd canonical_nu_extension(const Surface& S, const Eigen::VectorXd& ambient);

/// D[h][k] = Z_h(nu^H_k) at p for the canonical extension, computed by
/// exact polynomial differentiation of the unnormalized components plus
/// the quotient rule for the normalization. Refuses characteristic points.
Eigen::MatrixXd nu_derivative_matrix(const Surface& S, const Point& p);

/// sum_{h,k} Z_h(nu_k) Z_k(nu_h); extension-independent.
double nu_pair_sum(const Surface& S, const Point& p);

/// h(e_i, e_j) = <nabla_{e_i} nu^H, e_j> over the deterministic tangent
/// basis. With verify set, the independent -<nabla_X Y, nu^H> route (via
/// a polynomial tangent extension of e_j) is evaluated as well and a
/// disagreement above 1e-9 throws.
ShapeForm second_fundamental_form(const Surface& S, const Point& p, bool verify = false);

/// -<nabla_{e_i} E_j, nu^H>(p) with E_j a polynomial horizontal field,
/// tangent along S, equal to |N^H|^2 e_j at p. Polynomial kinds only.
Eigen::MatrixXd shape_matrix_via_connection(const Surface& S, const Point& p,
                                            const std::vector<HVec>& basis);

ShapeForm symmetrize(const ShapeForm& sf);

/// |h_p|^2 = sum Z_h(nu_k) Z_k(nu_h) + 4(n-1)(Td^H)^2.
double norm_h_sq_formula(const Surface& S, const Point& p);

/// |h~_p|^2 = sum Z_h(nu_k) Z_k(nu_h) + 2(n-1)(Td^H)^2.
double norm_tilde_h_sq_formula(const Surface& S, const Point& p);

/// Horizontal mean curvature H = div_H nu^H = trace of the derivative
/// matrix (equal to the trace of the form matrix).
double mean_curvature(const Surface& S, const Point& p);

/// True iff |h~|^2 < tol^2 at p (horizontally totally geodesic there).
bool is_htg_at(const Surface& S, const Point& p, double tol);

}  // namespace heisgeo
