#ifndef SPX_STUDY_HPP
#define SPX_STUDY_HPP

#include <string>
#include <vector>

#include "spx/interpolation.hpp"

namespace spx {

struct StudyConfig {
  std::string study = "convergence";  // convergence | condition | surface | diagnostics
  std::string domain = "bean";        // bean | circle | cone-circle | <path.json>
  int p = 2;
  std::vector<double> gammas = {1.0};
  std::vector<double> hs = {0.125, 0.0625, 0.03125, 0.015625};
  int shifts = 10;
  double beta = -1.0;  // < 0: 25 p^2
  WeightMode weights = WeightMode::CutArea;
  int quad_order = 0;  // 0: p + 2
  unsigned long long seed = 2026;
  std::string out_dir = "out";
  int threads = 0;  // 0: hardware concurrency
  int dense_cap = 6000;
  int dense_threshold = 3000;
  bool timing = true;
  int segments_per_crossing = 8;
  int boundary_segments = 0;
  int sh_radius = 0;  // 0: p + 1 neighborhood
  bool dump_matrices = false;
  bool debug_svg = false;

  double beta_value() const { return beta < 0.0 ? 25.0 * p * p : beta; }
  int quad_order_value() const { return quad_order > 0 ? quad_order : p + 2; }

  static StudyConfig from_json_file(const std::string &path);
  void apply_json_file(const std::string &path);
  std::string to_json() const;
  /// FNV-1a hash of the canonical JSON form.
  std::string config_hash() const;
};

struct StudyRecord {
  std::string study;
  int p = 0;
  double gamma = 0.0, h = 0.0;
  int shift_id = 0;  // -1: worst-case row, -2: slope row
  Vec2 shift{0.0, 0.0};
  int dofs_full = 0, dofs_large = 0;
  double errL2 = -1.0, errH1 = -1.0;
  double cond_raw = -1.0, cond_diag = -1.0;
  double sh_diam_ratio = -1.0;
  std::string status = "ok";
  double walltime_s = 0.0;
};

std::string csv_header();
std::string csv_row(const StudyRecord &r);

struct StudyResult {
  std::vector<StudyRecord> records;  // per-shift rows then worst/slope rows
  std::string csv_path;
};

StudyResult run_convergence(const StudyConfig &cfg);
StudyResult run_condition(const StudyConfig &cfg);
StudyResult run_surface(const StudyConfig &cfg);
StudyResult run_diagnostics(const StudyConfig &cfg);
StudyResult run_study(const StudyConfig &cfg);  // dispatch on cfg.study

/// Renders log-log figures from a study CSV; returns the written paths.
std::vector<std::string> emit_plots(const std::string &csv_path,
                                    const std::string &out_dir);

/// Least-squares slope of log(y) against log(x) over the last `n` points.
double loglog_slope(const std::vector<double> &x, const std::vector<double> &y,
                    int n = 3);

}  // namespace spx

#endif
