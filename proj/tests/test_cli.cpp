#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace {

std::string cli_binary() {
  const char* env = std::getenv("HEISGEO_CLI");
  REQUIRE_MESSAGE(env != nullptr, "HEISGEO_CLI must point at the built tool");
  return env;
}

struct RunResult {
  int exit_code = -1;
  std::string stdout_text;
  std::string stderr_text;
};

std::string work_dir() {
  static std::string dir = [] {
    char tmpl[] = "/tmp/heisgeo_cli_XXXXXX";
    const char* d = mkdtemp(tmpl);
    REQUIRE(d != nullptr);
    return std::string(d);
  }();
  return dir;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run(const std::string& args, const std::string& env_prefix = "") {
  const std::string out = work_dir() + "/stdout.txt";
  const std::string err = work_dir() + "/stderr.txt";
  const std::string cmd =
      env_prefix + cli_binary() + " " + args + " > " + out + " 2> " + err;
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.stdout_text = slurp(out);
  r.stderr_text = slurp(err);
  return r;
}

std::string write_config(const std::string& name, const std::string& text) {
  const std::string path = work_dir() + "/" + name;
  std::ofstream out(path);
  out << text;
  return path;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

int column_index(const std::vector<std::string>& header, const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

const char* kSaddleConfig = R"({
  "surface": {"kind": "saddle", "n": 2},
  "curvature": {"box": {"lo": [-1, -1, -1, -1], "hi": [1, 1, 1, 1]}, "res": 7}
})";

}  // namespace

TEST_CASE("curvature grid over the saddle") {
  const std::string cfg = write_config("saddle.json", kSaddleConfig);
  const RunResult r = run("curvature --config " + cfg);
  REQUIRE(r.exit_code == 0);
  const auto rows = parse_csv(r.stdout_text);
  REQUIRE(rows.size() > 1);
  const int ch = column_index(rows[0], "char");
  const int hcol = column_index(rows[0], "H");
  const int tcol = column_index(rows[0], "h_tilde_sq");
  REQUIRE(ch >= 0);
  REQUIRE(hcol >= 0);
  REQUIRE(tcol >= 0);

  double max_tilde = 0.0;
  int chars = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i][ch] == "1") {
      ++chars;
      continue;
    }
    CHECK(std::abs(std::stod(rows[i][hcol])) < 1e-8);
    max_tilde = std::max(max_tilde, std::stod(rows[i][tcol]));
  }
  CHECK(chars > 0);          // the characteristic line meets the grid
  CHECK(max_tilde > 1e-3);   // but the symmetric form does not vanish
}

TEST_CASE("curvature grid over the model hyperplane") {
  const std::string cfg = write_config("plane.json", R"({
    "surface": {"kind": "hyperplane", "a": [1.0, -2.0], "b": [0.5, 0.0],
                "c": 1.0, "d": 3.0},
    "curvature": {"box": {"lo": [-2, -2, -2, -2], "hi": [2, 2, 2, 2]}, "res": 5}
  })");
  const RunResult r = run("curvature --config " + cfg);
  REQUIRE(r.exit_code == 0);
  const auto rows = parse_csv(r.stdout_text);
  REQUIRE(rows.size() > 1);
  const int ch = column_index(rows[0], "char");
  const int tcol = column_index(rows[0], "h_tilde_sq");
  const int gcol = column_index(rows[0], "htg");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i][ch] == "1") continue;
    CHECK(std::abs(std::stod(rows[i][tcol])) < 1e-8);
    CHECK(rows[i][gcol] == "1");
  }
}

TEST_CASE("the hyperplane's characteristic point is an isolated grid hit") {
  // same hyperplane as a t-graph: the z-grid (res 9 over [-2, 2], step
  // 0.5) contains the characteristic point (0.5, 0, -1, 2) exactly once
  const std::string cfg = write_config("plane_tgraph.json", R"({
    "surface": {"kind": "t-graph", "n": 2,
      "poly": [{"coeff": -1.0, "exps": [1, 0, 0, 0]},
               {"coeff":  2.0, "exps": [0, 1, 0, 0]},
               {"coeff": -0.5, "exps": [0, 0, 1, 0]},
               {"coeff": -3.0, "exps": [0, 0, 0, 0]}]},
    "curvature": {"box": {"lo": [-2, -2, -2, -2], "hi": [2, 2, 2, 2]}, "res": 9}
  })");
  const RunResult r = run("curvature --config " + cfg);
  REQUIRE(r.exit_code == 0);
  const auto rows = parse_csv(r.stdout_text);
  REQUIRE(rows.size() == 9 * 9 * 9 * 9 + 1);
  const int ch = column_index(rows[0], "char");
  int char_rows = 0;
  std::vector<std::string> char_z;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i][ch] == "1") {
      ++char_rows;
      char_z.assign(rows[i].begin(), rows[i].begin() + 4);
    }
  }
  REQUIRE(char_rows == 1);
  CHECK(std::stod(char_z[0]) == 0.5);
  CHECK(std::stod(char_z[1]) == 0.0);
  CHECK(std::stod(char_z[2]) == -1.0);
  CHECK(std::stod(char_z[3]) == 2.0);
}

TEST_CASE("curvature grid over a vertical hyperplane") {
  // t-independent defining function: the grid solves a z-coordinate
  const std::string cfg = write_config("vert_grid.json", R"({
    "surface": {"kind": "vertical-hyperplane", "a": [1.0, 0.5],
                "b": [-0.25, 2.0], "c": 0.7},
    "curvature": {"box": {"lo": [-1, -1, -1, -1], "hi": [1, 1, 1, 1]}, "res": 4}
  })");
  const RunResult r = run("curvature --config " + cfg);
  REQUIRE(r.exit_code == 0);
  const auto rows = parse_csv(r.stdout_text);
  REQUIRE(rows.size() > 1);
  const int ch = column_index(rows[0], "char");
  const int hs = column_index(rows[0], "h_sq");
  const int tdh = column_index(rows[0], "TdH");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i][ch] == "0");  // vertical hyperplanes are non-characteristic
    CHECK(std::abs(std::stod(rows[i][hs])) < 1e-12);
    CHECK(std::abs(std::stod(rows[i][tdh])) < 1e-14);
  }
}

TEST_CASE("config validation names the offending key") {
  const std::string cfg = write_config("bad.json", R"({
    "surface": {"kind": "saddle", "n": 2, "bogus": 1},
    "curvature": {"box": {"lo": [-1, -1, -1, -1], "hi": [1, 1, 1, 1]}, "res": 3}
  })");
  const RunResult r = run("curvature --config " + cfg);
  CHECK(r.exit_code == 2);
  CHECK(r.stderr_text.find("bogus") != std::string::npos);
}

TEST_CASE("empty grid boxes are rejected") {
  const std::string cfg = write_config("empty.json", R"({
    "surface": {"kind": "saddle", "n": 2},
    "curvature": {"box": {"lo": [1, 1, 1, 1], "hi": [1, 1, 1, 1]}, "res": 3}
  })");
  const RunResult r = run("curvature --config " + cfg);
  CHECK(r.exit_code == 2);
  CHECK(r.stderr_text.find("empty") != std::string::npos);
}

TEST_CASE("missing config exits with usage code") {
  const RunResult r = run("curvature");
  CHECK(r.exit_code == 2);
  const RunResult r2 = run("curvature --config /nonexistent/path.json");
  CHECK(r2.exit_code == 2);
}

TEST_CASE("geodesic on the flat chart is a straight line") {
  const std::string cfg = write_config("geo_flat.json", R"({
    "surface": {"kind": "intrinsic-y1", "n": 2, "poly": [],
                "box": {"lo": [-50, -50, -50, -50], "hi": [50, 50, 50, 50]}},
    "geodesic": {"q0": [0, 0, 0, 0], "direction": [0, 1, 0, 0],
                 "step": 0.01, "horizon": 1.0}
  })");
  const RunResult r = run("geodesic --config " + cfg);
  REQUIRE(r.exit_code == 0);
  const auto rows = parse_csv(r.stdout_text);
  REQUIRE(rows.size() == 202);  // header + samples over s in [-1, 1]
  const int scol = column_index(rows[0], "s");
  const int xcol = column_index(rows[0], "xi2");
  const int ycol = column_index(rows[0], "py1");
  const int rescol = column_index(rows[0], "member_residual");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(std::abs(std::stod(rows[i][xcol]) - std::stod(rows[i][scol])) < 1e-12);
    CHECK(std::abs(std::stod(rows[i][ycol])) < 1e-15);
    CHECK(std::abs(std::stod(rows[i][rescol])) < 1e-12);
  }
}

TEST_CASE("geodesic step halving shows fourth-order convergence") {
  const auto endpoint = [&](double step) {
    const std::string cfg = write_config(
        "geo_curved.json",
        std::string(R"({
      "surface": {"kind": "intrinsic-y1", "n": 2,
        "poly": [{"coeff": 0.1, "exps": [0, 2, 0, 0]},
                 {"coeff": 0.05, "exps": [0, 0, 0, 1]}],
        "box": {"lo": [-5, -5, -5, -5], "hi": [5, 5, 5, 5]}},
      "geodesic": {"q0": [0.2, -0.3, 0.4, 0.1],
                   "direction": [1.0, 0.5, -0.02235, -0.25],
                   "step": )") +
            std::to_string(step) + R"(, "horizon": 1.0}
    })");
    const RunResult r = run("geodesic --config " + cfg);
    REQUIRE(r.exit_code == 0);
    const auto rows = parse_csv(r.stdout_text);
    std::vector<double> last;
    for (std::size_t c = 0; c < rows.back().size(); ++c)
      last.push_back(std::stod(rows.back()[c]));
    return last;
  };
  const auto a = endpoint(0.02);
  const auto b = endpoint(0.01);
  const auto c = endpoint(0.005);
  double e1 = 0.0, e2 = 0.0;
  for (std::size_t i = 1; i < 5; ++i) {  // chart coordinates xi1, xi2, eta2, tau
    e1 = std::max(e1, std::abs(a[i] - b[i]));
    e2 = std::max(e2, std::abs(b[i] - c[i]));
  }
  CHECK(e1 / e2 > 10.0);
  CHECK(e1 / e2 < 22.0);
}

TEST_CASE("geodesic domain exit is reported with the last valid s") {
  const std::string cfg = write_config("geo_exit.json", R"({
    "surface": {"kind": "intrinsic-y1", "n": 2, "poly": [],
                "box": {"lo": [-0.05, -0.05, -0.05, -0.05],
                        "hi": [0.05, 0.05, 0.05, 0.05]}},
    "geodesic": {"q0": [0, 0, 0, 0], "direction": [0, 1, 0, 0],
                 "step": 0.01, "horizon": 1.0}
  })");
  const RunResult r = run("geodesic --config " + cfg);
  REQUIRE(r.exit_code == 0);
  CHECK(r.stdout_text.find("left the chart domain") != std::string::npos);
}

TEST_CASE("geodesic requires a chart surface") {
  const std::string cfg = write_config("geo_tgraph.json", R"({
    "surface": {"kind": "saddle", "n": 2},
    "geodesic": {"q0": [0, 0, 0, 0], "direction": [0, 1, 0, 0]}
  })");
  const RunResult r = run("geodesic --config " + cfg);
  CHECK(r.exit_code == 2);
  CHECK(r.stderr_text.find("chart") != std::string::npos);
}

TEST_CASE("ruling reports") {
  // helicoid: all rays stay
  const std::string helic = write_config("helic.json", R"({
    "surface": {"kind": "helicoid"},
    "ruling": {"point": [0.43512697778946507, 0.54832883673923838, 0.9],
               "n_dirs": 2, "s_max": 10.0, "step": 0.1, "tol": 1e-9}
  })");
  const RunResult r1 = run("ruling --config " + helic);
  REQUIRE(r1.exit_code == 0);
  const auto j1 = nlohmann::json::parse(r1.stdout_text);
  CHECK(j1["all_stay"].get<bool>());
  for (const auto& ray : j1["rays"]) {
    CHECK(ray["forward"]["max_residual"].get<double>() < 1e-10);
    CHECK(ray["backward"]["max_residual"].get<double>() < 1e-10);
  }

  // vertical hyperplane: all rays stay with zero residual
  const std::string vert = write_config("vert.json", R"({
    "surface": {"kind": "vertical-hyperplane", "a": [1.0, 0.5],
                "b": [-0.25, 2.0], "c": 0.7},
    "ruling": {"point": [0.13176470588235292, 0.065882352941176461,
                         -0.032941176470588231, 0.26352941176470585, 0.3],
               "n_dirs": 6, "s_max": 10.0, "step": 0.25, "tol": 1e-9}
  })");
  const RunResult r2 = run("ruling --config " + vert);
  REQUIRE(r2.exit_code == 0);
  const auto j2 = nlohmann::json::parse(r2.stdout_text);
  CHECK(j2["all_stay"].get<bool>());
  for (const auto& ray : j2["rays"]) {
    CHECK(ray["forward"]["max_residual"].get<double>() < 1e-12);
    CHECK(ray["backward"]["max_residual"].get<double>() < 1e-12);
  }

  // saddle: some ray exits at a non-characteristic point
  const std::string sad = write_config("sad_rul.json", R"({
    "surface": {"kind": "saddle", "n": 2},
    "ruling": {"point": [0.5, 0.2, -0.3, 0.4, 0.08],
               "n_dirs": 8, "s_max": 10.0, "step": 0.05, "tol": 1e-9}
  })");
  const RunResult r3 = run("ruling --config " + sad);
  REQUIRE(r3.exit_code == 0);
  const auto j3 = nlohmann::json::parse(r3.stdout_text);
  CHECK(!j3["all_stay"].get<bool>());
  bool found_nonchar_exit = false;
  for (const auto& ray : j3["rays"]) {
    for (const char* side : {"forward", "backward"}) {
      if (!ray[side]["stays"].get<bool>() &&
          !ray[side]["endpoint_characteristic"].get<bool>())
        found_nonchar_exit = true;
    }
  }
  CHECK(found_nonchar_exit);
}

TEST_CASE("computation failures exit with code 1") {
  // base point not on the surface: the scan itself fails, not the config
  const std::string cfg = write_config("off_surface.json", R"({
    "surface": {"kind": "saddle", "n": 2},
    "ruling": {"point": [0.5, 0.2, -0.3, 0.4, 5.0], "n_dirs": 2,
               "s_max": 1.0, "step": 0.05, "tol": 1e-9}
  })");
  const RunResult r = run("ruling --config " + cfg);
  CHECK(r.exit_code == 1);
  CHECK(r.stderr_text.find("ruling failed") != std::string::npos);
}

TEST_CASE("reports are byte-identical across runs and worker counts") {
  const std::string cfg = write_config("det.json", kSaddleConfig);
  const RunResult a = run("curvature --config " + cfg + " --workers 1");
  const RunResult b = run("curvature --config " + cfg + " --workers 3");
  const RunResult c = run("curvature --config " + cfg + " --workers 3");
  REQUIRE(a.exit_code == 0);
  CHECK(a.stdout_text == b.stdout_text);
  CHECK(b.stdout_text == c.stdout_text);
}

TEST_CASE("verify runs the release gate") {
  const RunResult r = run("verify");
  CHECK(r.exit_code == 0);
  CHECK(r.stdout_text.find("[FAIL]") == std::string::npos);
  // one line per criterion
  int lines = 0;
  for (char ch : r.stdout_text)
    if (ch == '\n') ++lines;
  CHECK(lines == 8);

  // the mutation hook must break the algebra criterion
  const RunResult m = run("verify", "HEISGEO_MUTATE=group-law ");
  CHECK(m.exit_code == 1);
  CHECK(m.stdout_text.find("[FAIL] 8 group-algebra") != std::string::npos);
}

TEST_CASE("json output format") {
  const std::string cfg = write_config("jsonfmt.json", kSaddleConfig);
  const RunResult r = run("curvature --config " + cfg + " --format json");
  REQUIRE(r.exit_code == 0);
  const auto j = nlohmann::json::parse(r.stdout_text);
  REQUIRE(j.is_array());
  CHECK(j.size() == 7 * 7 * 7 * 7);
  const RunResult bad = run("curvature --config " + cfg + " --format yaml");
  CHECK(bad.exit_code == 2);
}
