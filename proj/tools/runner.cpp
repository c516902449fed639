#include "runner.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

#include <json.hpp>

#include "heisgeo/curvature.hpp"
#include "heisgeo/geodesic.hpp"
#include "heisgeo/ruling.hpp"
#include "heisgeo/selfcheck.hpp"
#include "heisgeo/surface.hpp"

namespace heisgeo::cli {

using nlohmann::json;

namespace {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// |h~| below this counts as horizontally totally geodesic in grid rows
constexpr double kHtgTol = 1e-6;

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void reject_unknown_keys(const json& j, const std::vector<std::string>& allowed,
                         const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const std::string& k : allowed)
      if (it.key() == k) {
        ok = true;
        break;
      }
    if (!ok) throw ConfigError("unknown key \"" + it.key() + "\" in " + where);
  }
}

double require_number(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError("missing key \"" + key + "\" in " + where);
  if (!j[key].is_number()) throw ConfigError("key \"" + key + "\" in " + where + " must be a number");
  return j[key].get<double>();
}

Eigen::VectorXd parse_vector(const json& j, const std::string& key,
                             const std::string& where) {
  if (!j.contains(key)) throw ConfigError("missing key \"" + key + "\" in " + where);
  if (!j[key].is_array()) throw ConfigError("key \"" + key + "\" in " + where + " must be an array");
  const auto& arr = j[key];
  Eigen::VectorXd v(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number())
      throw ConfigError("key \"" + key + "\" in " + where + " must contain numbers");
    v[i] = arr[i].get<double>();
  }
  return v;
}

Poly parse_poly(const json& j, int nvars, const std::string& where) {
  if (!j.is_array()) throw ConfigError("\"poly\" in " + where + " must be an array of terms");
  Poly p(nvars);
  for (const auto& term : j) {
    reject_unknown_keys(term, {"coeff", "exps"}, where + ".poly[]");
    const double coeff = require_number(term, "coeff", where + ".poly[]");
    if (!term.contains("exps") || !term["exps"].is_array())
      throw ConfigError("poly term in " + where + " needs an \"exps\" array");
    Poly::Exponents exps;
    for (const auto& e : term["exps"]) {
      if (!e.is_number_integer())
        throw ConfigError("poly exponents in " + where + " must be integers");
      exps.push_back(e.get<int>());
    }
    if (static_cast<int>(exps.size()) != nvars)
      throw ConfigError("poly term in " + where + " has wrong \"exps\" length");
    p.add_term(exps, coeff);
  }
  return p;
}

Box parse_box(const json& j, int dim, const std::string& where) {
  reject_unknown_keys(j, {"lo", "hi"}, where + ".box");
  const Eigen::VectorXd lo = parse_vector(j, "lo", where + ".box");
  const Eigen::VectorXd hi = parse_vector(j, "hi", where + ".box");
  if (lo.size() != dim || hi.size() != dim)
    throw ConfigError("box in " + where + " must have dimension " + std::to_string(dim));
  return Box(lo, hi);
}

Surface parse_surface(const json& cfg) {
  if (!cfg.contains("surface"))
    throw ConfigError("missing \"surface\" section in config");
  const json& j = cfg["surface"];
  if (!j.contains("kind") || !j["kind"].is_string())
    throw ConfigError("surface needs a string \"kind\"");
  const std::string kind = j["kind"].get<std::string>();

  if (kind == "helicoid") {
    reject_unknown_keys(j, {"kind", "n"}, "surface");
    if (j.contains("n") && j["n"].get<int>() != 1)
      throw ConfigError("helicoid exists only for n = 1");
    return Surface::helicoid();
  }
  if (kind == "saddle") {
    reject_unknown_keys(j, {"kind", "n"}, "surface");
    if (!j.contains("n")) throw ConfigError("saddle needs \"n\"");
    return Surface::saddle(j["n"].get<int>());
  }
  if (kind == "vertical-hyperplane") {
    reject_unknown_keys(j, {"kind", "a", "b", "c"}, "surface");
    const Eigen::VectorXd a = parse_vector(j, "a", "surface");
    const Eigen::VectorXd b = parse_vector(j, "b", "surface");
    if (a.size() != b.size()) throw ConfigError("surface: a and b must have equal length");
    Eigen::VectorXd ab(a.size() + b.size());
    ab << a, b;
    return Surface::vertical_hyperplane(ab, require_number(j, "c", "surface"));
  }
  if (kind == "hyperplane") {
    reject_unknown_keys(j, {"kind", "a", "b", "c", "d"}, "surface");
    const Eigen::VectorXd a = parse_vector(j, "a", "surface");
    const Eigen::VectorXd b = parse_vector(j, "b", "surface");
    if (a.size() != b.size()) throw ConfigError("surface: a and b must have equal length");
    Eigen::VectorXd ab(a.size() + b.size());
    ab << a, b;
    return Surface::hyperplane(ab, require_number(j, "c", "surface"),
                               require_number(j, "d", "surface"));
  }

  if (!j.contains("n")) throw ConfigError("surface needs \"n\"");
  const int n = j["n"].get<int>();
  if (n < 1) throw ConfigError("surface: n must be >= 1");

  if (kind == "t-graph") {
    reject_unknown_keys(j, {"kind", "n", "poly"}, "surface");
    if (!j.contains("poly")) throw ConfigError("t-graph needs \"poly\"");
    return Surface::t_graph(n, parse_poly(j["poly"], 2 * n, "surface"));
  }
  if (kind == "intrinsic-y1") {
    reject_unknown_keys(j, {"kind", "n", "poly", "box"}, "surface");
    if (!j.contains("poly")) throw ConfigError("intrinsic-y1 needs \"poly\"");
    if (!j.contains("box")) throw ConfigError("intrinsic-y1 needs a domain \"box\"");
    return Surface::intrinsic_y1(n, parse_poly(j["poly"], 2 * n, "surface"),
                                 parse_box(j["box"], 2 * n, "surface"));
  }
  if (kind == "implicit") {
    reject_unknown_keys(j, {"kind", "n", "poly", "box"}, "surface");
    if (!j.contains("poly")) throw ConfigError("implicit needs \"poly\"");
    Box region = j.contains("box") ? parse_box(j["box"], 2 * n + 1, "surface")
                                   : Box::cube(2 * n + 1, -100.0, 100.0);
    return Surface::implicit(n, parse_poly(j["poly"], 2 * n + 1, "surface"),
                             std::move(region));
  }
  throw ConfigError("unknown surface kind \"" + kind + "\"");
}

json load_config(const std::string& path) {
  if (path.empty()) throw ConfigError("no config file given");
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return j;
}

void write_output(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot open output file " + out_path);
  out << text;
}

int effective_workers(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs fn(i) for i in [0, count) over a small thread pool; results are
/// gathered by index so output order never depends on scheduling. The
/// first worker exception is rethrown on the calling thread.
template <typename Fn>
void parallel_for(long count, int workers, Fn&& fn) {
  workers = std::min<long>(std::max(workers, 1), std::max(count, 1L));
  if (workers == 1) {
    for (long i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::exception_ptr error;
  std::mutex error_mutex;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      try {
        for (long i = w; i < count; i += workers) fn(i);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (std::thread& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

// --- grid sampling -------------------------------------------------------

struct GridSpec {
  Box box;                   // parameter box (2n-dimensional)
  std::vector<int> res;      // points per axis
  long total() const {
    long t = 1;
    for (int r : res) t *= r;
    return t;
  }
  Eigen::VectorXd point(long idx) const {
    Eigen::VectorXd x(box.dim());
    long rem = idx;
    for (int i = 0; i < box.dim(); ++i) {
      const int k = static_cast<int>(rem % res[i]);
      rem /= res[i];
      x[i] = res[i] == 1 ? 0.5 * (box.lo[i] + box.hi[i])
                         : box.lo[i] + k * (box.hi[i] - box.lo[i]) / (res[i] - 1);
    }
    return x;
  }
};

GridSpec parse_grid(const json& cfg, int dim) {
  if (!cfg.contains("curvature"))
    throw ConfigError("missing \"curvature\" section in config");
  const json& j = cfg["curvature"];
  reject_unknown_keys(j, {"box", "res"}, "curvature");
  if (!j.contains("box")) throw ConfigError("curvature needs a grid \"box\"");
  GridSpec g{parse_box(j["box"], dim, "curvature"), {}};
  if ((g.box.hi - g.box.lo).minCoeff() <= 0.0)
    throw ConfigError("curvature grid box is empty");
  if (!j.contains("res")) throw ConfigError("curvature needs \"res\"");
  if (j["res"].is_number_integer()) {
    g.res.assign(dim, j["res"].get<int>());
  } else if (j["res"].is_array()) {
    for (const auto& r : j["res"]) g.res.push_back(r.get<int>());
  } else {
    throw ConfigError("curvature \"res\" must be an integer or an array");
  }
  if (static_cast<int>(g.res.size()) != dim)
    throw ConfigError("curvature \"res\" must match the box dimension");
  for (int r : g.res)
    if (r < 1) throw ConfigError("curvature \"res\" entries must be >= 1");
  return g;
}

/// Lifts a parameter-grid point onto the surface. For implicit surfaces
/// the free coordinate (the one with the largest |gradient| component at
/// the region center) is solved by Newton iteration; rows where the
/// solve fails are skipped.
class GridLifter {
 public:
  explicit GridLifter(const Surface& S) : S_(S) {
    if (S.kind() == SurfaceKind::Implicit) {
      const Box& r = S.region();
      Eigen::VectorXd center = 0.5 * (r.lo + r.hi);
      const Point pc = Point::from_ambient(center);
      const Eigen::VectorXd g = S.defining_gradient(pc);
      g.cwiseAbs().maxCoeff(&solve_axis_);
    }
  }

  int param_dim() const { return 2 * S_.n(); }

  bool lift(const Eigen::VectorXd& x, Point& out) const {
    const int n = S_.n();
    switch (S_.kind()) {
      case SurfaceKind::TGraph:
        out = Point(x, S_.tgraph_u().eval(x));
        return true;
      case SurfaceKind::IntrinsicY1:
        if (!S_.chart_domain().contains(x)) return false;
        out = lift_psi(S_.intrinsic_phi(), x);
        return true;
      case SurfaceKind::Helicoid: {
        Eigen::VectorXd z(2);
        z << x[0] * std::cos(x[1]), x[0] * std::sin(x[1]);
        out = Point(z, x[1]);
        return true;
      }
      case SurfaceKind::Implicit: {
        Eigen::VectorXd amb(2 * n + 1);
        int src = 0;
        for (int i = 0; i < 2 * n + 1; ++i)
          amb[i] = (i == solve_axis_) ? 0.0 : x[src++];
        const Poly& f = S_.defining();
        const Poly df = f.diff(solve_axis_);
        for (int it = 0; it < 60; ++it) {
          const double v = f.eval(amb);
          if (std::abs(v) < 1e-13) break;
          const double d = df.eval(amb);
          if (std::abs(d) < 1e-14) return false;
          amb[solve_axis_] -= v / d;
        }
        if (std::abs(f.eval(amb)) > 1e-10 || !std::isfinite(amb[solve_axis_]))
          return false;
        out = Point::from_ambient(amb);
        return true;
      }
    }
    return false;
  }

 private:
  const Surface& S_;
  Eigen::Index solve_axis_ = 0;
};

}  // namespace

// --- curvature command ----------------------------------------------------

int run_curvature(const CommonOptions& opts) {
  json cfg;
  Surface S = Surface::helicoid();  // overwritten below
  GridSpec grid;
  try {
    cfg = load_config(opts.config_path);
    reject_unknown_keys(cfg, {"surface", "curvature", "out", "format"}, "config");
    S = parse_surface(cfg);
    grid = parse_grid(cfg, 2 * S.n());
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  const double char_tol = opts.tol_char > 0.0 ? opts.tol_char : kCharTol;
  const std::string format = opts.format.empty() ? "csv" : opts.format;
  const GridLifter lifter(S);
  const long total = grid.total();
  const int n = S.n();

  struct Row {
    bool present = false;
    Point p;
    bool charFlag = false;
    double TdH = 0.0, H = 0.0, h_sq = 0.0, ht_sq = 0.0;
    bool htg = false;
  };
  std::vector<Row> rows(total);

  try {
    parallel_for(total, effective_workers(opts.workers), [&](long i) {
      Point p;
      if (!lifter.lift(grid.point(i), p)) return;
      Row& r = rows[i];
      r.present = true;
      r.p = p;
      const SurfacePointData d = surface_point_data(S, p, char_tol);
      r.charFlag = d.charFlag;
      if (d.charFlag) {
        r.TdH = r.H = r.h_sq = r.ht_sq = std::nan("");
        return;
      }
      r.TdH = d.TdH;
      const Eigen::MatrixXd D = nu_derivative_matrix(S, p);
      r.H = D.trace();
      const double pair = D.cwiseProduct(D.transpose()).sum();
      r.h_sq = pair + 4.0 * (n - 1) * d.TdH * d.TdH;
      r.ht_sq = pair + 2.0 * (n - 1) * d.TdH * d.TdH;
      r.htg = r.ht_sq < kHtgTol * kHtgTol;
    });
  } catch (const std::exception& e) {
    std::cerr << "curvature failed: " << e.what() << "\n";
    return 1;
  }

  std::ostringstream out;
  if (format == "csv") {
    for (int j = 0; j < n; ++j) out << "x" << (j + 1) << ",";
    for (int j = 0; j < n; ++j) out << "y" << (j + 1) << ",";
    out << "t,char,TdH,H,h_sq,h_tilde_sq,htg\n";
    for (const Row& r : rows) {
      if (!r.present) continue;
      for (int j = 0; j < 2 * n; ++j) out << fmt_double(r.p.z[j]) << ",";
      out << fmt_double(r.p.t) << "," << (r.charFlag ? 1 : 0) << ","
          << fmt_double(r.TdH) << "," << fmt_double(r.H) << ","
          << fmt_double(r.h_sq) << "," << fmt_double(r.ht_sq) << ","
          << (r.htg ? 1 : 0) << "\n";
    }
  } else if (format == "json") {
    json arr = json::array();
    for (const Row& r : rows) {
      if (!r.present) continue;
      json row;
      const Eigen::VectorXd amb = r.p.ambient();
      row["point"] = std::vector<double>(amb.data(), amb.data() + amb.size());
      row["char"] = r.charFlag;
      if (!r.charFlag) {
        row["TdH"] = r.TdH;
        row["H"] = r.H;
        row["h_sq"] = r.h_sq;
        row["h_tilde_sq"] = r.ht_sq;
        row["htg"] = r.htg;
      }
      arr.push_back(std::move(row));
    }
    out << arr.dump(2) << "\n";
  } else {
    std::cerr << "config error: unknown format \"" << format << "\"\n";
    return 2;
  }

  try {
    write_output(opts.out_path, out.str());
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 0;
}

// --- geodesic command -----------------------------------------------------

int run_geodesic(const CommonOptions& opts) {
  json cfg;
  Surface S = Surface::helicoid();
  Eigen::VectorXd q0, dir;
  double step = 1e-3, horizon = 1.0;
  try {
    cfg = load_config(opts.config_path);
    reject_unknown_keys(cfg, {"surface", "geodesic", "out", "format"}, "config");
    S = parse_surface(cfg);
    if (S.kind() != SurfaceKind::IntrinsicY1) {
      std::cerr << "config error: geodesic integration requires an intrinsic-y1 "
                   "chart surface; re-express the surface in such a chart\n";
      return 2;
    }
    if (!cfg.contains("geodesic"))
      throw ConfigError("missing \"geodesic\" section in config");
    const json& j = cfg["geodesic"];
    reject_unknown_keys(j, {"q0", "point", "direction", "step", "horizon"},
                        "geodesic");
    const int n = S.n();
    if (j.contains("q0")) {
      q0 = parse_vector(j, "q0", "geodesic");
      if (q0.size() != 2 * n) throw ConfigError("geodesic \"q0\" must have length 2n");
    } else if (j.contains("point")) {
      const Eigen::VectorXd amb = parse_vector(j, "point", "geodesic");
      if (amb.size() != 2 * n + 1)
        throw ConfigError("geodesic \"point\" must have length 2n+1");
      q0 = project_pi(Point::from_ambient(amb));
    } else {
      throw ConfigError("geodesic needs \"q0\" or \"point\"");
    }
    dir = parse_vector(j, "direction", "geodesic");
    if (dir.size() != 2 * n)
      throw ConfigError("geodesic \"direction\" must have length 2n");
    if (j.contains("step")) step = j["step"].get<double>();
    if (j.contains("horizon")) horizon = j["horizon"].get<double>();
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  if (opts.step > 0.0) step = opts.step;
  if (opts.horizon > 0.0) horizon = opts.horizon;
  if (!(step > 0.0) || !(horizon > 0.0)) {
    std::cerr << "config error: step and horizon must be positive\n";
    return 2;
  }

  const std::string format = opts.format.empty() ? "csv" : opts.format;
  std::ostringstream out;
  try {
    const Poly& phi = S.intrinsic_phi();
    const Point p = lift_psi(S, q0);
    const GeodesicState s0 = initial_state(S, p, HVec(dir));
    const int n_steps = static_cast<int>(std::llround(horizon / step));

    // integrate over s in [-horizon, horizon]: the backward half is the
    // forward flow of the velocity-reversed state
    GeodesicState s0_rev = s0;
    s0_rev.Xi = -s0_rev.Xi;
    s0_rev.Eta_dot = -s0_rev.Eta_dot;
    const Trajectory bwd = integrate(S, s0_rev, step, n_steps);
    const Trajectory fwd = integrate(S, s0, step, n_steps);

    Trajectory traj;
    traj.step = step;
    traj.domain_exit = fwd.domain_exit || bwd.domain_exit;
    for (std::size_t i = bwd.samples.size(); i-- > 1;) {
      GeodesicState st = bwd.samples[i].state;
      st.Xi = -st.Xi;
      st.Eta_dot = -st.Eta_dot;
      traj.samples.push_back({-bwd.samples[i].s, std::move(st)});
    }
    for (const TrajectorySample& smp : fwd.samples) traj.samples.push_back(smp);

    const std::vector<LiftedSample> lift = lift_trajectory(phi, traj);
    const int n = S.n();

    if (format == "csv") {
      out << "s,";
      for (int j = 1; j <= n; ++j) out << "xi" << j << ",";
      for (int j = 2; j <= n; ++j) out << "eta" << j << ",";
      out << "tau,";
      for (int j = 1; j <= n; ++j) out << "px" << j << ",";
      for (int j = 1; j <= n; ++j) out << "py" << j << ",";
      out << "pt,speed,member_residual,horiz_residual\n";
      for (std::size_t i = 0; i < lift.size(); ++i) {
        const GeodesicState& st = traj.samples[i].state;
        const Eigen::VectorXd vel = chart_velocity(phi, st);
        // frame T-component of the assembled ambient velocity
        const double alpha = phi.eval(st.chart_point());
        const double alpha_dot = vel.dot(phi.jet2(st.chart_point()).gradient);
        Eigen::VectorXd amb_vel(2 * n + 1);
        amb_vel.head(n) = st.Xi;
        amb_vel[n] = alpha_dot;
        amb_vel.segment(n + 1, n - 1) = st.Eta_dot;
        amb_vel[2 * n] = vel[2 * n - 1] - st.Xi[0] * alpha - st.xi[0] * alpha_dot;
        const double horiz =
            std::abs(frame_coefficients(amb_vel, lift[i].p)[2 * n]);
        out << fmt_double(lift[i].s) << ",";
        for (int j = 0; j < n; ++j) out << fmt_double(st.xi[j]) << ",";
        for (int j = 0; j < n - 1; ++j) out << fmt_double(st.eta[j]) << ",";
        out << fmt_double(st.tau) << ",";
        for (int j = 0; j < 2 * n; ++j) out << fmt_double(lift[i].p.z[j]) << ",";
        out << fmt_double(lift[i].p.t) << "," << fmt_double(lift[i].vel.norm())
            << "," << fmt_double(membership_residual(S, lift[i].p)) << ","
            << fmt_double(horiz) << "\n";
      }
      if (bwd.domain_exit)
        out << "# trajectory left the chart domain before s = "
            << fmt_double(-bwd.samples.back().s) << "\n";
      if (fwd.domain_exit)
        out << "# trajectory left the chart domain after s = "
            << fmt_double(fwd.samples.back().s) << "\n";
    } else if (format == "json") {
      json jout;
      jout["domain_exit"] = traj.domain_exit;
      json arr = json::array();
      for (std::size_t i = 0; i < lift.size(); ++i) {
        json row;
        row["s"] = lift[i].s;
        const Eigen::VectorXd q = traj.samples[i].state.chart_point();
        row["q"] = std::vector<double>(q.data(), q.data() + q.size());
        const Eigen::VectorXd amb = lift[i].p.ambient();
        row["point"] = std::vector<double>(amb.data(), amb.data() + amb.size());
        row["speed"] = lift[i].vel.norm();
        row["member_residual"] = membership_residual(S, lift[i].p);
        arr.push_back(std::move(row));
      }
      jout["samples"] = std::move(arr);
      out << jout.dump(2) << "\n";
    } else {
      std::cerr << "config error: unknown format \"" << format << "\"\n";
      return 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "geodesic failed: " << e.what() << "\n";
    return 1;
  }

  try {
    write_output(opts.out_path, out.str());
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 0;
}

// --- ruling command -------------------------------------------------------

namespace {

json verdict_to_json(const RayVerdict& v) {
  json j;
  j["stays"] = v.stays_within_horizon;
  j["max_residual"] = v.max_residual_before_exit;
  if (v.exit_s) {
    j["exit_s"] = *v.exit_s;
    j["endpoint_characteristic"] = *v.endpoint_characteristic;
    if (v.endpoint_nh_norm) j["endpoint_nh_norm"] = *v.endpoint_nh_norm;
  } else {
    j["exit_s"] = nullptr;
    j["endpoint_characteristic"] = nullptr;
  }
  return j;
}

void verdict_to_csv(std::ostringstream& out, const RayVerdict& v) {
  out << (v.stays_within_horizon ? 1 : 0) << ",";
  out << (v.exit_s ? fmt_double(*v.exit_s) : "") << ",";
  out << (v.endpoint_characteristic ? (*v.endpoint_characteristic ? "1" : "0") : "")
      << "," << fmt_double(v.max_residual_before_exit);
}

}  // namespace

int run_ruling(const CommonOptions& opts) {
  json cfg;
  Surface S = Surface::helicoid();
  Eigen::VectorXd point;
  Eigen::VectorXd direction;  // empty: fan of sampled directions
  int n_dirs = 8;
  double s_max = 10.0, step = 0.05, tol = 1e-9;
  try {
    cfg = load_config(opts.config_path);
    reject_unknown_keys(cfg, {"surface", "ruling", "out", "format"}, "config");
    S = parse_surface(cfg);
    if (!cfg.contains("ruling"))
      throw ConfigError("missing \"ruling\" section in config");
    const json& j = cfg["ruling"];
    reject_unknown_keys(j, {"point", "direction", "n_dirs", "s_max", "step", "tol"},
                        "ruling");
    point = parse_vector(j, "point", "ruling");
    if (point.size() != 2 * S.n() + 1)
      throw ConfigError("ruling \"point\" must have length 2n+1");
    if (j.contains("direction")) {
      direction = parse_vector(j, "direction", "ruling");
      if (direction.size() != 2 * S.n())
        throw ConfigError("ruling \"direction\" must have length 2n");
    }
    if (j.contains("n_dirs")) n_dirs = j["n_dirs"].get<int>();
    if (j.contains("s_max")) s_max = j["s_max"].get<double>();
    if (j.contains("step")) step = j["step"].get<double>();
    if (j.contains("tol")) tol = j["tol"].get<double>();
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  if (opts.step > 0.0) step = opts.step;
  if (opts.horizon > 0.0) s_max = opts.horizon;
  if (opts.tol_member > 0.0) tol = opts.tol_member;

  const std::string format = opts.format.empty() ? "json" : opts.format;
  std::ostringstream out;
  try {
    const Point p = Point::from_ambient(point);
    std::vector<HVec> dirs;
    if (direction.size() > 0) {
      dirs.emplace_back(direction / direction.norm());
    } else {
      dirs = tangent_directions(S, p, n_dirs);
    }

    std::vector<DirectionReport> reports(dirs.size());
    parallel_for(static_cast<long>(dirs.size()), effective_workers(opts.workers),
                 [&](long i) {
                   reports[i].w = dirs[i];
                   reports[i].forward = ray_scan(S, p, dirs[i], s_max, step, tol);
                   reports[i].backward =
                       ray_scan(S, p, HVec(-dirs[i].c), s_max, step, tol);
                 });

    bool all_stay = true;
    for (const DirectionReport& dr : reports)
      all_stay = all_stay && dr.forward.stays_within_horizon &&
                 dr.backward.stays_within_horizon;

    if (format == "json") {
      json jout;
      jout["all_stay"] = all_stay;
      jout["s_max"] = s_max;
      jout["note"] = "verdicts are horizon-bounded evidence, not proofs";
      json arr = json::array();
      json witnesses = json::array();
      for (std::size_t i = 0; i < reports.size(); ++i) {
        const DirectionReport& dr = reports[i];
        json row;
        row["direction"] =
            std::vector<double>(dr.w.c.data(), dr.w.c.data() + dr.w.c.size());
        row["forward"] = verdict_to_json(dr.forward);
        row["backward"] = verdict_to_json(dr.backward);
        arr.push_back(std::move(row));
        const auto add_witness = [&](const RayVerdict& v, const char* side) {
          if (v.stays_within_horizon || !v.endpoint) return;
          json w;
          w["direction_index"] = i;
          w["orientation"] = side;
          w["exit_s"] = *v.exit_s;
          const Eigen::VectorXd amb = v.endpoint->ambient();
          w["endpoint"] = std::vector<double>(amb.data(), amb.data() + amb.size());
          w["endpoint_nh_norm"] = *v.endpoint_nh_norm;
          w["endpoint_characteristic"] = *v.endpoint_characteristic;
          witnesses.push_back(std::move(w));
        };
        add_witness(dr.forward, "+");
        add_witness(dr.backward, "-");
      }
      jout["rays"] = std::move(arr);
      jout["witnesses"] = std::move(witnesses);
      out << jout.dump(2) << "\n";
    } else if (format == "csv") {
      out << "dir_index,orientation,stays,exit_s,endpoint_characteristic,"
             "max_residual\n";
      for (std::size_t i = 0; i < reports.size(); ++i) {
        out << i << ",+,";
        verdict_to_csv(out, reports[i].forward);
        out << "\n" << i << ",-,";
        verdict_to_csv(out, reports[i].backward);
        out << "\n";
      }
    } else {
      std::cerr << "config error: unknown format \"" << format << "\"\n";
      return 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "ruling failed: " << e.what() << "\n";
    return 1;
  }

  try {
    write_output(opts.out_path, out.str());
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 0;
}

int run_verify(bool corrupt_group_law) {
  SelfcheckOptions o;
  o.corrupt_group_law = corrupt_group_law;
  const std::vector<CriterionResult> results = run_selfcheck(std::cout, o);
  return all_passed(results) ? 0 : 1;
}

}  // namespace heisgeo::cli
