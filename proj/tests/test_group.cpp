#include <doctest.h>

#include <cmath>
#include <functional>

#include "heisgeo/detrand.hpp"
#include "heisgeo/group.hpp"
#include "heisgeo/poly.hpp"

using namespace heisgeo;

namespace {

Point random_point(DetRng& rng, int n, double scale = 2.0) {
  return Point(rng.uniform_vec(2 * n, -scale, scale), rng.uniform(-scale, scale));
}

// first-order action of the frame field Z_i on a scalar function, by
// central differences along the frame vector at the evaluation point
double apply_field(const std::function<double(const Eigen::VectorXd&)>& f, int i,
                   const Point& p, double h) {
  const Eigen::VectorXd dir = frame_vector(i, p);
  return (f(p.ambient() + h * dir) - f(p.ambient() - h * dir)) / (2.0 * h);
}

}  // namespace

TEST_CASE("dimension bookkeeping") {
  const Dimension d(3);
  CHECK(d.n() == 3);
  CHECK(d.ambient() == 7);
  CHECK(d.rank() == 6);
  CHECK_THROWS_AS(Dimension(0), std::invalid_argument);
  CHECK_THROWS_AS(Dimension(-2), std::invalid_argument);
}

TEST_CASE("symplectic form") {
  Eigen::VectorXd z(2), zp(2);
  z << 0.0, 1.0;
  zp << 1.0, 0.0;
  CHECK(symplectic_q(z, z) == 0.0);
  CHECK(symplectic_q(z, zp) == 1.0);

  Eigen::VectorXd a(4), b(4);
  a << 1, 2, 3, 4;
  b << 5, 6, 7, 8;
  CHECK(symplectic_q(a, b) == 16.0);
  // independent evaluation of the defining sum
  double q = 0.0;
  for (int j = 0; j < 2; ++j) q += b[j] * a[2 + j] - a[j] * b[2 + j];
  CHECK(q == 16.0);

  CHECK_THROWS_AS(symplectic_q(z, a), std::invalid_argument);
}

TEST_CASE("group law") {
  DetRng rng(21);
  for (int n : {1, 2, 3}) {
    const Point e = Point::origin(n);
    for (int trial = 0; trial < 30; ++trial) {
      const Point p = random_point(rng, n);
      CHECK((group_mul(p, e).ambient() - p.ambient()).norm() == 0.0);
      CHECK(group_mul(p, group_inv(p)).ambient().cwiseAbs().maxCoeff() <= 1e-14);
      CHECK(group_mul(group_inv(p), p).ambient().cwiseAbs().maxCoeff() <= 1e-14);
    }
  }

  Eigen::VectorXd z1(2), z2(2);
  z1 << 1.0, 0.0;
  z2 << 0.0, 1.0;
  const Point prod = group_mul(Point(z1, 0.0), Point(z2, 0.0));
  CHECK(prod.z[0] == 1.0);
  CHECK(prod.z[1] == 1.0);
  CHECK(prod.t == -1.0);

  CHECK_THROWS_AS(group_mul(Point::origin(1), Point::origin(2)),
                  std::invalid_argument);
}

TEST_CASE("associativity on random triples") {
  DetRng rng(22);
  for (int trial = 0; trial < 120; ++trial) {
    const int n = 1 + trial % 3;
    const Point p = random_point(rng, n), q = random_point(rng, n),
                r = random_point(rng, n);
    const Point lhs = group_mul(group_mul(p, q), r);
    const Point rhs = group_mul(p, group_mul(q, r));
    CHECK((lhs.ambient() - rhs.ambient()).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("inverse fixes the origin and negates coordinates") {
  const Point e = Point::origin(2);
  CHECK(group_inv(e).ambient().norm() == 0.0);
  Eigen::VectorXd z(4);
  z << 1, -2, 3, -4;
  const Point p(z, 5.0);
  const Point pi = group_inv(p);
  CHECK((pi.z + p.z).norm() == 0.0);
  CHECK(pi.t == -5.0);
}

TEST_CASE("dilations") {
  DetRng rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + trial % 3;
    const Point p = random_point(rng, n);
    CHECK((dilate(1.0, p).ambient() - p.ambient()).norm() == 0.0);

    const double lam = rng.uniform(0.2, 3.0), mu = rng.uniform(0.2, 3.0);
    const Point a = dilate(lam, dilate(mu, p));
    const Point b = dilate(lam * mu, p);
    CHECK((a.ambient() - b.ambient()).cwiseAbs().maxCoeff() <= 1e-12);

    const Point q = random_point(rng, n);
    const Point h1 = dilate(lam, group_mul(p, q));
    const Point h2 = group_mul(dilate(lam, p), dilate(lam, q));
    CHECK((h1.ambient() - h2.ambient()).cwiseAbs().maxCoeff() <= 1e-12);
  }
  CHECK_THROWS_AS(dilate(0.0, Point::origin(1)), std::invalid_argument);
  CHECK_THROWS_AS(dilate(-2.0, Point::origin(1)), std::invalid_argument);
}

TEST_CASE("left translation") {
  DetRng rng(24);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 2;
    const Point p = random_point(rng, n), q = random_point(rng, n);
    CHECK((left_translate(Point::origin(n), p).ambient() - p.ambient()).norm() == 0.0);
    CHECK((left_translate(q, Point::origin(n)).ambient() - q.ambient()).norm() == 0.0);
    const Point round = left_translate(q, left_translate(group_inv(q), p));
    CHECK((round.ambient() - p.ambient()).cwiseAbs().maxCoeff() <= 1e-13);
  }
}

TEST_CASE("complex structure J") {
  // J(X_1) = Y_1 in H^2
  Eigen::VectorXd x1 = Eigen::VectorXd::Zero(4);
  x1[0] = 1.0;
  const HVec jx1 = j_apply(HVec(x1));
  CHECK(jx1.c[2] == 1.0);
  CHECK(jx1.c.cwiseAbs().sum() == 1.0);

  DetRng rng(25);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + trial % 3;
    const HVec v(rng.uniform_vec(2 * n, -2.0, 2.0));
    const HVec u(rng.uniform_vec(2 * n, -2.0, 2.0));
    CHECK((j_apply(j_apply(v)).c + v.c).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK(std::abs(j_apply(v).c.dot(v.c)) <= 1e-14);
    CHECK(std::abs(j_apply(u).c.dot(j_apply(v).c) - u.c.dot(v.c)) <= 1e-14);
  }
}

TEST_CASE("frame vectors") {
  DetRng rng(26);
  const int n = 2;
  const Point p = random_point(rng, n);
  CHECK(frame_vector(2 * n, p)[2 * n] == 1.0);
  CHECK(frame_vector(2 * n, p).head(2 * n).norm() == 0.0);

  const Eigen::VectorXd x1_at_origin = frame_vector(0, Point::origin(n));
  CHECK(x1_at_origin[0] == 1.0);
  CHECK(x1_at_origin.tail(2 * n).norm() == 0.0);

  // X_j picks up y_j e_t, Y_j picks up -x_j e_t
  CHECK(frame_vector(0, p)[2 * n] == p.y(0));
  CHECK(frame_vector(n, p)[2 * n] == -p.x(0));

  CHECK_THROWS_AS(frame_vector(2 * n + 1, p), std::out_of_range);
}

TEST_CASE("frame commutators by nested finite differences") {
  const int n = 2;
  const auto f = [](const Eigen::VectorXd& a) {
    return std::sin(a[0] + 2.0 * a[2]) + 0.5 * a[4] * a[4] + a[1] * a[3] * a[4];
  };
  DetRng rng(27);
  const double h = 1e-4;
  for (int trial = 0; trial < 5; ++trial) {
    const Point p = random_point(rng, n, 1.0);
    for (int j = 0; j < n; ++j) {
      const auto yf = [&](const Eigen::VectorXd& a) {
        return apply_field(f, n + j, Point::from_ambient(a), h);
      };
      const auto xf = [&](const Eigen::VectorXd& a) {
        return apply_field(f, j, Point::from_ambient(a), h);
      };
      const double comm = apply_field(yf, j, p, h) - apply_field(xf, n + j, p, h);
      const double tf = apply_field(f, 2 * n, p, h);
      CHECK(std::abs(comm - (-2.0 * tf)) < 1e-6);
    }
  }
}

TEST_CASE("frame commutators, coefficient-exact") {
  // [X_j, Y_j] = -2T and all other brackets vanish, as operators on
  // ambient polynomials
  for (int n : {1, 2}) {
    const int nv = 2 * n + 1;
    const auto op = [&](int which, const Poly& g) {
      if (which == 2 * n) return g.diff(2 * n);
      if (which < n)
        return g.diff(which) + Poly::variable(nv, n + which) * g.diff(2 * n);
      return g.diff(which) - Poly::variable(nv, which - n) * g.diff(2 * n);
    };
    std::vector<Poly> monomials;
    for (int i = 0; i < nv; ++i)
      for (int j = i; j < nv; ++j)
        monomials.push_back(Poly::variable(nv, i) * Poly::variable(nv, j));
    for (int a = 0; a <= 2 * n; ++a) {
      for (int b = 0; b <= 2 * n; ++b) {
        for (const Poly& g : monomials) {
          Poly comm = op(a, op(b, g)) - op(b, op(a, g));
          if (a < n && b == n + a) comm += g.diff(2 * n) * 2.0;
          if (b < n && a == n + b) comm -= g.diff(2 * n) * 2.0;
          CHECK(comm.same_terms(Poly(nv)));
        }
      }
    }
  }
}

TEST_CASE("block rotations") {
  CHECK_THROWS_AS(BlockRotation(Eigen::MatrixXd::Identity(2, 2) * 2.0,
                                Eigen::MatrixXd::Zero(2, 2)),
                  std::invalid_argument);

  const int n = 2;
  DetRng rng(28);
  // rotation in the (x1, y1) complex line
  const double c = std::cos(0.7), s = std::sin(0.7);
  Eigen::MatrixXd A(2, 2), B(2, 2);
  A << c, 0, 0, 1;
  B << s, 0, 0, 0;
  const BlockRotation R(A, B);

  const Point p = random_point(rng, n);
  CHECK((pseudoherm_transform(BlockRotation::identity(n), p).ambient() -
         p.ambient()).norm() == 0.0);

  // differential on horizontal vectors: phi_R(p . delta_s(v)) =
  // phi_R(p) . delta_s(R v)
  for (int trial = 0; trial < 10; ++trial) {
    const HVec v(rng.uniform_vec(2 * n, -1.0, 1.0));
    const double sarg = rng.uniform(-2.0, 2.0);
    const Point lhs =
        pseudoherm_transform(R, group_mul(p, Point(sarg * v.c, 0.0)));
    const Point rhs =
        group_mul(pseudoherm_transform(R, p), Point(sarg * rotate(R, v).c, 0.0));
    CHECK((lhs.ambient() - rhs.ambient()).cwiseAbs().maxCoeff() <= 1e-13);
  }

  // group homomorphism under phi_R on random pairs
  for (int trial = 0; trial < 10; ++trial) {
    const Point a = random_point(rng, n), b = random_point(rng, n);
    const Point lhs = pseudoherm_transform(R, group_mul(a, b));
    const Point rhs =
        group_mul(pseudoherm_transform(R, a), pseudoherm_transform(R, b));
    CHECK((lhs.ambient() - rhs.ambient()).cwiseAbs().maxCoeff() <= 1e-13);
  }
}
