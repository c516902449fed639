#pragma once

#include <string>

namespace heisgeo::cli {

struct CommonOptions {
  std::string config_path;
  std::string out_path;     // empty: stdout
  std::string format;       // "csv" | "json"; empty: command default
  int workers = 0;          // 0: hardware concurrency
  double tol_char = 0.0;    // 0: default
  double tol_member = 0.0;  // 0: default
  double step = 0.0;        // 0: from config / default
  double horizon = 0.0;     // 0: from config / default
};

// Exit codes: 0 success, 1 computation failure, 2 usage/config error.
int run_curvature(const CommonOptions& opts);
int run_geodesic(const CommonOptions& opts);
int run_ruling(const CommonOptions& opts);
int run_verify(bool corrupt_group_law);

}  // namespace heisgeo::cli
