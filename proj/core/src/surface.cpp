#include "heisgeo/surface.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace heisgeo {

namespace {

constexpr double kGradFloor = 1e-10;
constexpr double kDefaultRegionHalfWidth = 100.0;

/// Z_k applied to an ambient polynomial g(x, y, t), k in [0, 2n).
Poly frame_derivative(const Poly& g, int k, int n) {
  const int nv = 2 * n + 1;
  const Poly dt = g.diff(2 * n);
  if (k < n) return g.diff(k) + Poly::variable(nv, n + k) * dt;
  return g.diff(k) - Poly::variable(nv, k - n) * dt;
}

void require_chart_point(const Poly& phi, const Eigen::VectorXd& q) {
  if (q.size() != phi.nvars())
    throw std::invalid_argument("intrinsic chart: q must have length 2n");
}

// Helicoid helpers; the surface is {(r cos t, r sin t, t)} in H^1 and the
// defining residual is g = x sin t - y cos t.
double helicoid_residual(const Point& p) {
  return p.z[0] * std::sin(p.t) - p.z[1] * std::cos(p.t);
}

Eigen::VectorXd helicoid_gradient(const Point& p) {
  Eigen::VectorXd g(3);
  g[0] = std::sin(p.t);
  g[1] = -std::cos(p.t);
  g[2] = p.z[0] * std::cos(p.t) + p.z[1] * std::sin(p.t);
  return g;
}

}  // namespace

Box::Box(Eigen::VectorXd lo_, Eigen::VectorXd hi_)
    : lo(std::move(lo_)), hi(std::move(hi_)) {
  if (lo.size() != hi.size() || lo.size() == 0)
    throw std::invalid_argument("Box: lo/hi must share positive length");
  if ((hi - lo).minCoeff() < 0.0)
    throw std::invalid_argument("Box: empty box (hi < lo)");
}

Box Box::cube(int dim, double a, double b) {
  return Box(Eigen::VectorXd::Constant(dim, a), Eigen::VectorXd::Constant(dim, b));
}

bool Box::contains(const Eigen::VectorXd& x, double slack) const {
  if (x.size() != lo.size())
    throw std::invalid_argument("Box::contains: dimension mismatch");
  return (x.array() >= lo.array() - slack).all() &&
         (x.array() <= hi.array() + slack).all();
}

void Surface::finalize_polynomial() {
  const Poly& F = *defining_;
  raw_.clear();
  zraw_.clear();
  raw_.reserve(2 * n_);
  for (int k = 0; k < 2 * n_; ++k) raw_.push_back(frame_derivative(F, k, n_));
  zraw_.reserve(4 * n_ * n_);
  for (int h = 0; h < 2 * n_; ++h)
    for (int k = 0; k < 2 * n_; ++k)
      zraw_.push_back(frame_derivative(raw_[k], h, n_));
}

Surface Surface::t_graph(int n, Poly u) {
  if (n < 1) throw std::invalid_argument("Surface::t_graph: n must be >= 1");
  if (u.nvars() != 2 * n)
    throw std::invalid_argument("Surface::t_graph: u must have 2n variables");
  Surface S;
  S.n_ = n;
  S.kind_ = SurfaceKind::TGraph;
  std::vector<int> id(2 * n);
  for (int i = 0; i < 2 * n; ++i) id[i] = i;
  S.defining_ = u.promote(2 * n + 1, id) - Poly::variable(2 * n + 1, 2 * n);
  S.u_ = std::move(u);
  S.finalize_polynomial();
  return S;
}

Surface Surface::intrinsic_y1(int n, Poly phi, Box domain) {
  if (n < 1) throw std::invalid_argument("Surface::intrinsic_y1: n must be >= 1");
  if (phi.nvars() != 2 * n)
    throw std::invalid_argument("Surface::intrinsic_y1: phi must have 2n variables");
  if (domain.dim() != 2 * n)
    throw std::invalid_argument("Surface::intrinsic_y1: domain must have dimension 2n");
  Surface S;
  S.n_ = n;
  S.kind_ = SurfaceKind::IntrinsicY1;
  const int nv = 2 * n + 1;
  // chart vars (xi, eta~, tau) -> ambient (x, y~, t + x1 y1)
  std::vector<Poly> subs;
  subs.reserve(2 * n);
  for (int i = 0; i < n; ++i) subs.push_back(Poly::variable(nv, i));
  for (int j = 1; j < n; ++j) subs.push_back(Poly::variable(nv, n + j));
  subs.push_back(Poly::variable(nv, 2 * n) +
                 Poly::variable(nv, 0) * Poly::variable(nv, n));
  S.defining_ = phi.compose(subs) - Poly::variable(nv, n);
  S.phi_ = std::move(phi);
  S.domain_ = std::move(domain);
  S.finalize_polynomial();
  return S;
}

Surface Surface::implicit(int n, Poly f, Box region) {
  if (n < 1) throw std::invalid_argument("Surface::implicit: n must be >= 1");
  if (f.nvars() != 2 * n + 1)
    throw std::invalid_argument("Surface::implicit: f must have 2n+1 variables");
  if (region.dim() != 2 * n + 1)
    throw std::invalid_argument("Surface::implicit: region must have dimension 2n+1");
  Surface S;
  S.n_ = n;
  S.kind_ = SurfaceKind::Implicit;
  S.defining_ = std::move(f);
  S.region_ = std::move(region);
  S.finalize_polynomial();

  // regular level set: |grad f| must not vanish on sampled region points
  // (endpoints and center included, so symmetric critical points are hit)
  const Poly& F = *S.defining_;
  const int dim = 2 * n + 1;
  const int per_axis = 5;
  std::vector<Poly> grad;
  for (int i = 0; i < dim; ++i) grad.push_back(F.diff(i));
  Eigen::VectorXd x(dim);
  long total = 1;
  for (int i = 0; i < dim; ++i) total *= per_axis;
  for (long idx = 0; idx < total; ++idx) {
    long rem = idx;
    for (int i = 0; i < dim; ++i) {
      const int k = rem % per_axis;
      rem /= per_axis;
      x[i] = S.region_->lo[i] +
             k * (S.region_->hi[i] - S.region_->lo[i]) / (per_axis - 1);
    }
    double g2 = 0.0;
    for (int i = 0; i < dim; ++i) {
      const double gi = grad[i].eval(x);
      g2 += gi * gi;
    }
    if (!(std::sqrt(g2) > kGradFloor))
      throw std::invalid_argument("Surface::implicit: gradient degenerates on region");
  }
  return S;
}

Surface Surface::helicoid() {
  Surface S;
  S.n_ = 1;
  S.kind_ = SurfaceKind::Helicoid;
  return S;
}

Surface Surface::vertical_hyperplane(const Eigen::VectorXd& ab, double c) {
  if (ab.size() == 0 || ab.size() % 2 != 0)
    throw std::invalid_argument("vertical_hyperplane: (a, b) must have length 2n");
  if (ab.norm() == 0.0)
    throw std::invalid_argument("vertical_hyperplane: (a, b) must be nonzero");
  const int n = static_cast<int>(ab.size()) / 2;
  const int nv = 2 * n + 1;
  Poly f(nv);
  for (int i = 0; i < 2 * n; ++i)
    if (ab[i] != 0.0) f += Poly::variable(nv, i) * ab[i];
  f += Poly::constant(nv, -c);
  return implicit(n, f, Box::cube(nv, -kDefaultRegionHalfWidth, kDefaultRegionHalfWidth));
}

Surface Surface::hyperplane(const Eigen::VectorXd& ab, double c, double d) {
  if (ab.size() == 0 || ab.size() % 2 != 0)
    throw std::invalid_argument("hyperplane: (a, b) must have length 2n");
  const int n = static_cast<int>(ab.size()) / 2;
  const int nv = 2 * n + 1;
  if (ab.norm() == 0.0 && c == 0.0)
    throw std::invalid_argument("hyperplane: coefficients must not all vanish");
  Poly f(nv);
  for (int i = 0; i < 2 * n; ++i)
    if (ab[i] != 0.0) f += Poly::variable(nv, i) * ab[i];
  if (c != 0.0) f += Poly::variable(nv, 2 * n) * c;
  f += Poly::constant(nv, d);
  return implicit(n, f, Box::cube(nv, -kDefaultRegionHalfWidth, kDefaultRegionHalfWidth));
}

Surface Surface::saddle(int n) {
  if (n < 1) throw std::invalid_argument("Surface::saddle: n must be >= 1");
  Poly u(2 * n);
  Poly::Exponents e(2 * n, 0);
  e[0] = 2;
  u.add_term(e, 0.5);  // x1^2 / 2
  std::fill(e.begin(), e.end(), 0);
  e[n] = 2;
  u.add_term(e, -0.5);  // -y1^2 / 2
  return t_graph(n, std::move(u));
}

const Poly& Surface::defining() const {
  if (!defining_) throw std::domain_error("Surface: no polynomial defining function");
  return *defining_;
}

const Poly& Surface::raw_field(int k) const {
  if (kind_ == SurfaceKind::Helicoid)
    throw std::domain_error("Surface: helicoid has no polynomial fields");
  if (k < 0 || k >= 2 * n_) throw std::out_of_range("Surface::raw_field");
  return raw_[k];
}

const Poly& Surface::zraw(int h, int k) const {
  if (kind_ == SurfaceKind::Helicoid)
    throw std::domain_error("Surface: helicoid has no polynomial fields");
  if (h < 0 || h >= 2 * n_ || k < 0 || k >= 2 * n_)
    throw std::out_of_range("Surface::zraw");
  return zraw_[h * 2 * n_ + k];
}

const Poly& Surface::tgraph_u() const {
  if (!u_) throw std::domain_error("Surface: not a t-graph");
  return *u_;
}

const Poly& Surface::intrinsic_phi() const {
  if (!phi_) throw std::domain_error("Surface: not an intrinsic Y1-graph");
  return *phi_;
}

const Box& Surface::chart_domain() const {
  if (!domain_) throw std::domain_error("Surface: not an intrinsic Y1-graph");
  return *domain_;
}

const Box& Surface::region() const {
  if (!region_) throw std::domain_error("Surface: no region box");
  return *region_;
}

Eigen::VectorXd Surface::defining_gradient(const Point& p) const {
  if (p.n() != n_)
    throw std::invalid_argument("Surface::defining_gradient: dimension mismatch");
  if (kind_ == SurfaceKind::Helicoid) return helicoid_gradient(p);
  const Poly& F = *defining_;
  const Eigen::VectorXd a = p.ambient();
  Eigen::VectorXd g(2 * n_ + 1);
  for (int i = 0; i < 2 * n_ + 1; ++i) g[i] = F.diff(i).eval(a);
  return g;
}

double Surface::grad_scale(const Point& p) const {
  return defining_gradient(p).norm();
}

double membership_residual(const Surface& S, const Point& p) {
  if (p.n() != S.n())
    throw std::invalid_argument("membership_residual: dimension mismatch");
  switch (S.kind()) {
    case SurfaceKind::TGraph:
      return std::abs(S.tgraph_u().eval(p.z) - p.t);
    case SurfaceKind::Implicit:
      return std::abs(S.defining().eval(p.ambient()));
    case SurfaceKind::IntrinsicY1:
      return std::abs(p.y(0) - S.intrinsic_phi().eval(project_pi(p)));
    case SurfaceKind::Helicoid:
      return std::abs(helicoid_residual(p));
  }
  throw std::logic_error("membership_residual: unknown kind");
}

bool on_surface(const Surface& S, const Point& p, double tol) {
  if (membership_residual(S, p) >= tol) return false;
  if (S.kind() == SurfaceKind::IntrinsicY1)
    return S.chart_domain().contains(project_pi(p), 1e-12);
  return true;
}

namespace {

void require_on_surface(const Surface& S, const Point& p) {
  if (!on_surface(S, p, kMemberTol))
    throw std::domain_error("point is not on the surface");
}

}  // namespace

Eigen::VectorXd euclidean_normal(const Surface& S, const Point& p) {
  require_on_surface(S, p);
  const Eigen::VectorXd g = S.defining_gradient(p);
  const double norm = g.norm();
  if (!(norm > kGradFloor))
    throw std::domain_error("euclidean_normal: degenerate gradient");
  return g / norm;
}

HVec horizontal_normal_raw(const Surface& S, const Point& p) {
  const Eigen::VectorXd N = euclidean_normal(S, p);
  const int n = S.n();
  Eigen::VectorXd c(2 * n);
  for (int j = 0; j < n; ++j) {
    c[j] = N[j] + p.y(j) * N[2 * n];      // <N, X_j>
    c[n + j] = N[n + j] - p.x(j) * N[2 * n];  // <N, Y_j>
  }
  return HVec(c);
}

bool is_characteristic(const Surface& S, const Point& p, double tol) {
  return horizontal_normal_raw(S, p).norm() <= tol;
}

SurfacePointData surface_point_data(const Surface& S, const Point& p, double tol) {
  SurfacePointData d;
  d.p = p;
  d.N = euclidean_normal(S, p);
  d.NH = horizontal_normal_raw(S, p);
  const double nh = d.NH.norm();
  d.charFlag = nh <= tol;
  if (d.charFlag) {
    d.TdH = std::numeric_limits<double>::quiet_NaN();
  } else {
    d.nuH = HVec(d.NH.c / nh);
    d.TdH = d.N[2 * S.n()] / nh;
  }
  return d;
}

std::vector<HVec> horizontal_tangent_basis(const Surface& S, const Point& p) {
  const SurfacePointData d = surface_point_data(S, p);
  if (d.charFlag)
    throw std::domain_error("horizontal_tangent_basis: characteristic point");
  const int rank = 2 * S.n();
  const Eigen::VectorXd nu = d.nuH->c;

  std::vector<Eigen::VectorXd> cand;
  cand.reserve(rank);
  for (int i = 0; i < rank; ++i) {
    Eigen::VectorXd c = -nu[i] * nu;
    c[i] += 1.0;
    cand.push_back(std::move(c));
  }

  std::vector<HVec> basis;
  std::vector<bool> used(rank, false);
  while (static_cast<int>(basis.size()) < rank - 1) {
    int pivot = -1;
    double best = 0.0;
    for (int i = 0; i < rank; ++i) {
      if (used[i]) continue;
      const double nrm = cand[i].norm();
      if (nrm > best) {
        best = nrm;
        pivot = i;
      }
    }
    if (pivot < 0 || best < 1e-10)
      throw std::domain_error("horizontal_tangent_basis: rank deficiency");
    used[pivot] = true;
    Eigen::VectorXd v = cand[pivot] / best;
    for (int i = 0; i < rank; ++i)
      if (!used[i]) cand[i] -= cand[i].dot(v) * v;
    for (int i = 0; i < rank; ++i) {
      if (std::abs(v[i]) > 1e-12) {
        if (v[i] < 0.0) v = -v;
        break;
      }
    }
    basis.emplace_back(std::move(v));
  }
  return basis;
}

Point lift_psi(const Poly& phi, const Eigen::VectorXd& q) {
  require_chart_point(phi, q);
  const int n = phi.nvars() / 2;
  const double alpha = phi.eval(q);
  Eigen::VectorXd z(2 * n);
  z.head(n) = q.head(n);
  z[n] = alpha;
  for (int j = 1; j < n; ++j) z[n + j] = q[n + j - 1];
  return Point(z, q[2 * n - 1] - q[0] * alpha);
}

Point lift_psi(const Surface& S, const Eigen::VectorXd& q) {
  if (!S.chart_domain().contains(q))
    throw std::domain_error("lift_psi: chart point outside domain");
  return lift_psi(S.intrinsic_phi(), q);
}

Eigen::VectorXd project_pi(const Point& p) {
  const int n = p.n();
  Eigen::VectorXd q(2 * n);
  q.head(n) = p.z.head(n);
  for (int j = 1; j < n; ++j) q[n + j - 1] = p.y(j);
  q[2 * n - 1] = p.t + p.x(0) * p.y(0);
  return q;
}

Eigen::VectorXd intrinsic_gradient(const Poly& phi, const Eigen::VectorXd& q) {
  require_chart_point(phi, q);
  const int n = phi.nvars() / 2;
  const int tau = 2 * n - 1;
  const double phi_tau = phi.diff(tau).eval(q);
  Eigen::VectorXd g(2 * n - 1);
  g[0] = phi.diff(0).eval(q) + 2.0 * phi.eval(q) * phi_tau;  // W^phi phi
  for (int j = 2; j <= n; ++j) {
    g[j - 1] = phi.diff(j - 1).eval(q) + q[n + j - 2] * phi_tau;      // X~_j phi
    g[n + j - 2] = phi.diff(n + j - 2).eval(q) - q[j - 1] * phi_tau;  // Y~_j phi
  }
  return g;
}

std::vector<HVec> intrinsic_graph_frames(const Poly& phi, const Eigen::VectorXd& q) {
  const int n = phi.nvars() / 2;
  const Eigen::VectorXd g = intrinsic_gradient(phi, q);
  std::vector<HVec> frames;
  frames.reserve(2 * n - 1);
  {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(2 * n);
    c[0] = 1.0;
    c[n] = g[0];
    frames.emplace_back(std::move(c));
  }
  for (int j = 2; j <= n; ++j) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(2 * n);
    c[j - 1] = 1.0;
    c[n] = g[j - 1];
    frames.emplace_back(std::move(c));
  }
  for (int j = 2; j <= n; ++j) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(2 * n);
    c[n + j - 1] = 1.0;
    c[n] = g[n + j - 2];
    frames.emplace_back(std::move(c));
  }
  return frames;
}

std::vector<HVec> intrinsic_graph_frames(const Surface& S, const Eigen::VectorXd& q) {
  if (!S.chart_domain().contains(q))
    throw std::domain_error("intrinsic_graph_frames: chart point outside domain");
  return intrinsic_graph_frames(S.intrinsic_phi(), q);
}

HVec intrinsic_normal(const Poly& phi, const Eigen::VectorXd& q) {
  const int n = phi.nvars() / 2;
  const Eigen::VectorXd g = intrinsic_gradient(phi, q);
  const double w = 1.0 + g.squaredNorm();
  Eigen::VectorXd c(2 * n);
  c[0] = g[0];
  for (int j = 2; j <= n; ++j) {
    c[j - 1] = g[j - 1];
    c[n + j - 1] = g[n + j - 2];
  }
  c[n] = -1.0;
  return HVec(c / std::sqrt(w));
}

HVec intrinsic_normal(const Surface& S, const Eigen::VectorXd& q) {
  if (!S.chart_domain().contains(q))
    throw std::domain_error("intrinsic_normal: chart point outside domain");
  return intrinsic_normal(S.intrinsic_phi(), q);
}

namespace {

Surface as_transformed_implicit(const Surface& S, const std::vector<Poly>& subs) {
  const int nv = 2 * S.n() + 1;
  return Surface::implicit(S.n(), S.defining().compose(subs),
                           Box::cube(nv, -kDefaultRegionHalfWidth, kDefaultRegionHalfWidth));
}

void require_transformable(const Surface& S) {
  if (S.kind() == SurfaceKind::Helicoid)
    throw std::domain_error("surface transformation: helicoid is not representable");
}

}  // namespace

Surface translate_surface(const Surface& S, const Point& q) {
  require_transformable(S);
  if (q.n() != S.n())
    throw std::invalid_argument("translate_surface: dimension mismatch");
  const int n = S.n();
  const int nv = 2 * n + 1;
  // substitute coordinates of q^{-1} . p
  std::vector<Poly> subs;
  subs.reserve(nv);
  for (int i = 0; i < 2 * n; ++i)
    subs.push_back(Poly::variable(nv, i) + Poly::constant(nv, -q.z[i]));
  Poly tsub = Poly::variable(nv, 2 * n) + Poly::constant(nv, -q.t);
  for (int j = 0; j < n; ++j) {
    if (q.x(j) != 0.0) tsub += Poly::variable(nv, n + j) * q.x(j);
    if (q.y(j) != 0.0) tsub -= Poly::variable(nv, j) * q.y(j);
  }
  subs.push_back(std::move(tsub));
  return as_transformed_implicit(S, subs);
}

Surface dilate_surface(const Surface& S, double lambda) {
  require_transformable(S);
  if (!(lambda > 0.0))
    throw std::invalid_argument("dilate_surface: lambda must be > 0");
  const int n = S.n();
  const int nv = 2 * n + 1;
  std::vector<Poly> subs;
  subs.reserve(nv);
  for (int i = 0; i < 2 * n; ++i)
    subs.push_back(Poly::variable(nv, i) * (1.0 / lambda));
  subs.push_back(Poly::variable(nv, 2 * n) * (1.0 / (lambda * lambda)));
  return as_transformed_implicit(S, subs);
}

Surface rotate_surface(const Surface& S, const BlockRotation& R) {
  require_transformable(S);
  if (R.n() != S.n())
    throw std::invalid_argument("rotate_surface: dimension mismatch");
  const int n = S.n();
  const int nv = 2 * n + 1;
  const Eigen::MatrixXd& M = R.full();  // substitute R^T (x, y)
  std::vector<Poly> subs;
  subs.reserve(nv);
  for (int k = 0; k < 2 * n; ++k) {
    Poly s(nv);
    for (int l = 0; l < 2 * n; ++l)
      if (M(l, k) != 0.0) s += Poly::variable(nv, l) * M(l, k);
    subs.push_back(std::move(s));
  }
  subs.push_back(Poly::variable(nv, 2 * n));
  return as_transformed_implicit(S, subs);
}

}  // namespace heisgeo
