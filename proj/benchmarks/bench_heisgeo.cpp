#include <benchmark/benchmark.h>

#include "heisgeo/curvature.hpp"
#include "heisgeo/detrand.hpp"
#include "heisgeo/geodesic.hpp"
#include "heisgeo/ruling.hpp"

using namespace heisgeo;

namespace {

Point random_point(DetRng& rng, int n) {
  return Point(rng.uniform_vec(2 * n, -2.0, 2.0), rng.uniform(-2.0, 2.0));
}

Surface model_hyperplane() {
  Eigen::VectorXd ab(4);
  ab << 1.0, -2.0, 0.5, 0.0;
  return Surface::hyperplane(ab, 1.0, 3.0);
}

Surface curved_chart() {
  Poly phi(4);
  phi.add_term({0, 2, 0, 0}, 0.1);
  phi.add_term({0, 0, 0, 1}, 0.05);
  return Surface::intrinsic_y1(2, std::move(phi), Box::cube(4, -5.0, 5.0));
}

void BM_GroupMul(benchmark::State& state) {
  DetRng rng(1);
  const int n = static_cast<int>(state.range(0));
  const Point p = random_point(rng, n), q = random_point(rng, n);
  for (auto _ : state) benchmark::DoNotOptimize(group_mul(p, q));
}
BENCHMARK(BM_GroupMul)->Arg(1)->Arg(3);

void BM_PolyEval(benchmark::State& state) {
  DetRng rng(2);
  Poly u(6);
  Poly::Exponents e(6, 0);
  for (int i = 0; i < 6; ++i)
    for (int j = i; j < 6; ++j) {
      std::fill(e.begin(), e.end(), 0);
      ++e[i];
      ++e[j];
      u.add_term(e, rng.uniform(-1.0, 1.0));
    }
  const Eigen::VectorXd x = rng.uniform_vec(6, -1.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(u.eval(x));
}
BENCHMARK(BM_PolyEval);

void BM_SurfacePointData(benchmark::State& state) {
  const Surface S = model_hyperplane();
  Eigen::VectorXd z(4);
  z << 0.3, -0.7, 1.2, 0.4;
  const Point p(z, -(z[0] - 2.0 * z[1] + 0.5 * z[2] + 3.0));
  for (auto _ : state) benchmark::DoNotOptimize(surface_point_data(S, p));
}
BENCHMARK(BM_SurfacePointData);

void BM_NuDerivativeMatrix(benchmark::State& state) {
  const Surface S = model_hyperplane();
  Eigen::VectorXd z(4);
  z << 0.3, -0.7, 1.2, 0.4;
  const Point p(z, -(z[0] - 2.0 * z[1] + 0.5 * z[2] + 3.0));
  for (auto _ : state) benchmark::DoNotOptimize(nu_derivative_matrix(S, p));
}
BENCHMARK(BM_NuDerivativeMatrix);

void BM_SecondFundamentalForm(benchmark::State& state) {
  const Surface S = Surface::saddle(2);
  Eigen::VectorXd z(4);
  z << 0.5, 0.2, -0.3, 0.4;
  const Point p(z, S.tgraph_u().eval(z));
  for (auto _ : state) benchmark::DoNotOptimize(second_fundamental_form(S, p));
}
BENCHMARK(BM_SecondFundamentalForm);

void BM_GeodesicStep(benchmark::State& state) {
  const Surface S = curved_chart();
  Eigen::VectorXd q0(4);
  q0 << 0.2, -0.3, 0.4, 0.1;
  const Point p = lift_psi(S.intrinsic_phi(), q0);
  const auto frames = intrinsic_graph_frames(S.intrinsic_phi(), q0);
  Eigen::VectorXd wc = frames[0].c + 0.5 * frames[1].c;
  const GeodesicState s0 = initial_state(S, p, HVec(wc / wc.norm()));
  for (auto _ : state)
    benchmark::DoNotOptimize(integrate(S, s0, 1e-3, 10));
}
BENCHMARK(BM_GeodesicStep);

void BM_RayScan(benchmark::State& state) {
  Eigen::VectorXd ab(4);
  ab << 1.0, 0.5, -0.25, 2.0;
  const Surface S = Surface::vertical_hyperplane(ab, 0.7);
  const Point p(0.7 * ab / ab.squaredNorm(), 0.3);
  const HVec w = horizontal_tangent_basis(S, p).front();
  for (auto _ : state)
    benchmark::DoNotOptimize(ray_scan(S, p, w, 10.0, 0.1, 1e-9));
}
BENCHMARK(BM_RayScan);

}  // namespace

BENCHMARK_MAIN();
