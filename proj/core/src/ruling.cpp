#include "heisgeo/ruling.hpp"

#include <cmath>
#include <stdexcept>

namespace heisgeo {

namespace {

Point ray_point(const Point& p, const HVec& w, double s) {
  return group_mul(p, Point(s * w.c, 0.0));
}

/// |N^H| at an arbitrary point from the defining gradient, without a
/// membership precondition (used to classify bisected exit points).
double nh_norm_at(const Surface& S, const Point& p) {
  const Eigen::VectorXd g = S.defining_gradient(p);
  const double gn = g.norm();
  if (!(gn > 0.0)) return 0.0;
  const int n = S.n();
  double acc = 0.0;
  for (int j = 0; j < n; ++j) {
    const double xc = g[j] + p.y(j) * g[2 * n];
    const double yc = g[n + j] - p.x(j) * g[2 * n];
    acc += xc * xc + yc * yc;
  }
  return std::sqrt(acc) / gn;
}

bool off_surface(const Surface& S, const Point& pt, double tol, double gscale) {
  if (membership_residual(S, pt) / gscale > tol) return true;
  if (S.kind() == SurfaceKind::IntrinsicY1 &&
      !S.chart_domain().contains(project_pi(pt), 1e-12))
    return true;
  return false;
}

// inverse normal CDF, Acklam's rational approximation (deterministic)
double inv_normal_cdf(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425, phigh = 1.0 - plow;
  double q, r;
  if (p < plow) {
    q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > phigh) {
    q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  q = p - 0.5;
  r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

double halton(int index, int base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * (index % base);
    index /= base;
  }
  return r;
}

}  // namespace

std::vector<Eigen::VectorXd> sphere_points(int dim, int count) {
  if (dim < 1) throw std::invalid_argument("sphere_points: dim must be >= 1");
  std::vector<Eigen::VectorXd> pts;
  if (dim == 1) {
    for (int i = 0; i < std::min(count, 2); ++i) {
      Eigen::VectorXd v(1);
      v[0] = (i == 0) ? 1.0 : -1.0;
      pts.push_back(v);
    }
    return pts;
  }
  static const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  if (dim > static_cast<int>(sizeof(primes) / sizeof(primes[0])))
    throw std::invalid_argument("sphere_points: dimension too large");
  for (int i = 0; i < count; ++i) {
    Eigen::VectorXd v(dim);
    for (int k = 0; k < dim; ++k) {
      const double u = halton(i + 1, primes[k]);
      v[k] = inv_normal_cdf(std::min(std::max(u, 1e-12), 1.0 - 1e-12));
    }
    const double nrm = v.norm();
    if (nrm < 1e-12) {
      v.setZero();
      v[0] = 1.0;
    } else {
      v /= nrm;
    }
    pts.push_back(v);
  }
  return pts;
}

RayVerdict ray_scan(const Surface& S, const Point& p, const HVec& w, double s_max,
                    double step, double tol) {
  if (!(s_max > 0.0) || !(step > 0.0) || !(tol > 0.0))
    throw std::invalid_argument("ray_scan: s_max, step, tol must be > 0");
  if (w.n() != S.n() || p.n() != S.n())
    throw std::invalid_argument("ray_scan: dimension mismatch");
  if (std::abs(w.norm() - 1.0) > 1e-6)
    throw std::invalid_argument("ray_scan: direction must be unit");
  if (!on_surface(S, p, kMemberTol))
    throw std::domain_error("ray_scan: base point is not on the surface");
  const SurfacePointData d = surface_point_data(S, p);
  if (d.charFlag) throw std::domain_error("ray_scan: characteristic base point");
  if (std::abs(w.c.dot(d.nuH->c)) > 1e-9)
    throw std::domain_error("ray_scan: direction is not horizontal-tangent");

  const double gscale = S.grad_scale(p);
  RayVerdict v;
  double s_prev = 0.0;
  v.max_residual_before_exit = membership_residual(S, p) / gscale;

  for (double s = step; s <= s_max + 0.5 * step; s += step) {
    const double sc = std::min(s, s_max);
    const Point pt = ray_point(p, w, sc);
    if (off_surface(S, pt, tol, gscale)) {
      // bisect the exit parameter to step * 1e-3 precision
      double lo = s_prev, hi = sc;
      while (hi - lo > step * 1e-3) {
        const double mid = 0.5 * (lo + hi);
        if (off_surface(S, ray_point(p, w, mid), tol, gscale))
          hi = mid;
        else
          lo = mid;
      }
      const Point last_on = ray_point(p, w, lo);
      v.stays_within_horizon = false;
      v.exit_s = 0.5 * (lo + hi);
      v.endpoint = last_on;
      const double nh = nh_norm_at(S, last_on);
      v.endpoint_nh_norm = nh;
      v.endpoint_characteristic = nh <= kCharTol;
      return v;
    }
    v.max_residual_before_exit =
        std::max(v.max_residual_before_exit, membership_residual(S, pt) / gscale);
    s_prev = sc;
    if (sc >= s_max) break;
  }
  return v;
}

std::vector<HVec> tangent_directions(const Surface& S, const Point& p, int n_dirs) {
  const std::vector<HVec> basis = horizontal_tangent_basis(S, p);
  const int dim = static_cast<int>(basis.size());
  std::vector<HVec> dirs;
  for (const Eigen::VectorXd& coeffs : sphere_points(dim, n_dirs)) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(2 * S.n());
    for (int i = 0; i < dim; ++i) c += coeffs[i] * basis[i].c;
    dirs.emplace_back(c / c.norm());
  }
  return dirs;
}

RulingReport local_ruling_check(const Surface& S, const Point& p, int n_dirs,
                                double s_probe, double tol) {
  RulingReport report;
  for (const HVec& w : tangent_directions(S, p, n_dirs)) {
    DirectionReport dr;
    dr.w = w;
    dr.forward = ray_scan(S, p, w, s_probe, s_probe / 64.0, tol);
    dr.backward = ray_scan(S, p, HVec(-w.c), s_probe, s_probe / 64.0, tol);
    report.all_stay = report.all_stay && dr.forward.stays_within_horizon &&
                      dr.backward.stays_within_horizon;
    report.rays.push_back(std::move(dr));
  }
  return report;
}

namespace {

bool verdicts_match(const RayVerdict& a, const RayVerdict& b) {
  if (a.stays_within_horizon != b.stays_within_horizon) return false;
  if (a.endpoint_characteristic.has_value() != b.endpoint_characteristic.has_value())
    return false;
  if (a.endpoint_characteristic &&
      *a.endpoint_characteristic != *b.endpoint_characteristic)
    return false;
  return true;
}

double residual_ratio(const RayVerdict& base, const RayVerdict& tr) {
  const double floor = 1e-14;
  return (tr.max_residual_before_exit + floor) /
         (base.max_residual_before_exit + floor);
}

}  // namespace

InvarianceReport invariance_suite(const Surface& S, const Point& p, const HVec& w,
                                  const Point& q, double lambda,
                                  const BlockRotation& R, double s_max, double step,
                                  double tol) {
  InvarianceReport report;
  const RayVerdict base = ray_scan(S, p, w, s_max, step, tol);

  {
    TransformCase tc;
    tc.name = "translate";
    tc.base = base;
    const Surface St = translate_surface(S, q);
    tc.transformed = ray_scan(St, left_translate(q, p), w, s_max, step, tol);
    tc.verdict_match = verdicts_match(tc.base, tc.transformed);
    tc.residual_ratio = residual_ratio(tc.base, tc.transformed);
    report.cases.push_back(std::move(tc));
  }
  {
    TransformCase tc;
    tc.name = "dilate";
    tc.base = base;
    const Surface Sd = dilate_surface(S, lambda);
    // delta_lambda(p . delta_s(w)) = delta_lambda(p) . delta_{lambda s}(w)
    tc.transformed = ray_scan(Sd, dilate(lambda, p), w, lambda * s_max,
                              lambda * step, tol);
    tc.verdict_match = verdicts_match(tc.base, tc.transformed);
    tc.residual_ratio = residual_ratio(tc.base, tc.transformed);
    report.cases.push_back(std::move(tc));
  }
  {
    TransformCase tc;
    tc.name = "rotate";
    tc.base = base;
    const Surface Sr = rotate_surface(S, R);
    const HVec wr = rotate(R, w);
    tc.transformed =
        ray_scan(Sr, pseudoherm_transform(R, p), HVec(wr.c / wr.norm()), s_max,
                 step, tol);
    tc.verdict_match = verdicts_match(tc.base, tc.transformed);
    tc.residual_ratio = residual_ratio(tc.base, tc.transformed);
    report.cases.push_back(std::move(tc));
  }
  for (const TransformCase& tc : report.cases)
    report.all_match = report.all_match && tc.verdict_match;
  return report;
}

}  // namespace heisgeo
