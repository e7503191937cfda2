#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "spx/study.hpp"
#include "spx/svg.hpp"

using namespace spx;

namespace {

std::string slurp(const std::string &path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

StudyConfig tiny_config(const std::string &study, const std::string &out) {
  StudyConfig cfg;
  cfg.study = study;
  cfg.p = 1;
  cfg.gammas = {1.0};
  cfg.hs = {0.125, 0.0625};
  cfg.shifts = 2;
  cfg.timing = false;
  cfg.out_dir = out;
  cfg.threads = 2;
  return cfg;
}

}  // namespace

TEST_CASE("csv header matches the pinned schema") {
  CHECK(csv_header() ==
        "study,p,gamma,h,shift_id,shift_x,shift_y,dofs_full,dofs_large,"
        "errL2,errH1,cond_raw,cond_diag,sh_diam_ratio,status,walltime_s\n");
}

TEST_CASE("identical config and seed give byte-identical output") {
  auto cfg1 = tiny_config("convergence", "/tmp/spx_det_a");
  auto cfg2 = tiny_config("convergence", "/tmp/spx_det_b");
  const auto r1 = run_convergence(cfg1);
  const auto r2 = run_convergence(cfg2);
  CHECK(slurp(r1.csv_path) == slurp(r2.csv_path));

  // a different seed moves the shifts
  cfg2.seed += 1;
  const auto r3 = run_convergence(cfg2);
  CHECK(slurp(r1.csv_path) != slurp(r3.csv_path));
}

TEST_CASE("shift offsets are uniform in [0,h)^2 and recorded") {
  auto cfg = tiny_config("convergence", "/tmp/spx_shifts");
  cfg.shifts = 5;
  const auto res = run_convergence(cfg);
  int counted = 0;
  for (const auto &r : res.records) {
    if (r.shift_id < 0) continue;
    ++counted;
    CHECK(r.shift.x >= 0.0);
    CHECK(r.shift.x < r.h);
    CHECK(r.shift.y >= 0.0);
    CHECK(r.shift.y < r.h);
  }
  CHECK(counted == 10);  // 2 h values x 5 shifts
}

TEST_CASE("worst-case rows are the max over shifts, slopes fit the tail") {
  auto cfg = tiny_config("convergence", "/tmp/spx_worst");
  cfg.shifts = 3;
  const auto res = run_convergence(cfg);
  for (double h : cfg.hs) {
    double max_l2 = -1.0, worst_row = -2.0;
    for (const auto &r : res.records) {
      if (r.h != h) continue;
      if (r.shift_id >= 0 && r.status == "ok") max_l2 = std::max(max_l2, r.errL2);
      if (r.shift_id == -1) worst_row = r.errL2;
    }
    CHECK(worst_row == max_l2);
  }
  // slope row: least-squares fit over the recorded worst values
  std::vector<double> hs, l2;
  double slope_row = 0.0;
  for (const auto &r : res.records) {
    if (r.shift_id == -1) {
      hs.push_back(r.h);
      l2.push_back(r.errL2);
    }
    if (r.shift_id == -2) slope_row = r.errL2;
  }
  CHECK(slope_row == doctest::Approx(loglog_slope(hs, l2)).epsilon(1e-12));
  CHECK(slope_row > 1.2);  // p=1: second order in L2, roughly
}

TEST_CASE("run manifest carries the config hash") {
  auto cfg = tiny_config("convergence", "/tmp/spx_manifest");
  run_convergence(cfg);
  const std::string manifest = slurp("/tmp/spx_manifest/run-manifest.json");
  CHECK(manifest.find(cfg.config_hash()) != std::string::npos);
  CHECK(manifest.find("convergence.csv") != std::string::npos);

  // the hash reacts to config changes
  auto cfg2 = cfg;
  cfg2.p = 2;
  CHECK(cfg.config_hash() != cfg2.config_hash());
}

TEST_CASE("config json round trip and file override") {
  StudyConfig cfg;
  cfg.p = 3;
  cfg.gammas = {0.25, 0.5};
  cfg.weights = WeightMode::Uniform;
  const std::string path = "/tmp/spx_cfg.json";
  std::ofstream(path) << cfg.to_json();
  const auto back = StudyConfig::from_json_file(path);
  CHECK(back.p == 3);
  CHECK(back.gammas == cfg.gammas);
  CHECK(back.weights == WeightMode::Uniform);
}

TEST_CASE("condition study records overcap refusals without dying") {
  auto cfg = tiny_config("condition", "/tmp/spx_overcap");
  cfg.dense_cap = 100;  // everything refuses
  const auto res = run_condition(cfg);
  int overcap = 0;
  for (const auto &r : res.records)
    if (r.status == "overcap") ++overcap;
  CHECK(overcap == 4);
}

TEST_CASE("condition study produces positive kappa within the cap") {
  auto cfg = tiny_config("condition", "/tmp/spx_cond");
  const auto res = run_condition(cfg);
  for (const auto &r : res.records) {
    if (r.shift_id < 0 || r.status != "ok") continue;
    CHECK(r.cond_raw >= 1.0);
    CHECK(r.cond_diag >= 1.0);
    // diagonal scaling helps on these meshes
    CHECK(r.cond_diag <= r.cond_raw * 1.01);
  }
}

TEST_CASE("surface identity run is bit-identical to the flat study") {
  auto flat = tiny_config("convergence", "/tmp/spx_flat");
  auto surf = tiny_config("surface", "/tmp/spx_surfid");
  const auto rf = run_convergence(flat);
  const auto rs = run_surface(surf);
  REQUIRE(rf.records.size() == rs.records.size());
  for (std::size_t i = 0; i < rf.records.size(); ++i) {
    if (rf.records[i].shift_id < 0) continue;
    CHECK(rf.records[i].errL2 == rs.records[i].errL2);
    CHECK(rf.records[i].errH1 == rs.records[i].errH1);
  }
}

TEST_CASE("cone surface run solves and reports the boundary residual") {
  StudyConfig cfg = tiny_config("surface", "/tmp/spx_cone");
  cfg.domain = "cone-circle";
  cfg.p = 2;
  cfg.gammas = {0.5};
  cfg.hs = {0.125, 0.0625};
  cfg.shifts = 1;
  const auto res = run_surface(cfg);
  for (const auto &r : res.records) {
    if (r.shift_id != 0) continue;
    CHECK(r.status == "ok");
    CHECK(r.errL2 > 0.0);
  }
  // finer mesh has a smaller error
  double coarse = -1, fine = -1;
  for (const auto &r : res.records)
    if (r.shift_id == -1) (r.h == 0.125 ? coarse : fine) = r.errL2;
  CHECK(fine < coarse);
  CHECK(std::filesystem::exists("/tmp/spx_cone/surface_solution.csv"));
  const std::string report = slurp("/tmp/spx_cone/surface_report.json");
  CHECK(report.find("max_boundary_residual") != std::string::npos);
}

TEST_CASE("diagnostics study emits metrics and figures") {
  StudyConfig cfg = tiny_config("diagnostics", "/tmp/spx_diag");
  cfg.gammas = {0.5};
  cfg.hs = {0.125};
  cfg.shifts = 1;
  cfg.debug_svg = true;
  const auto res = run_diagnostics(cfg);
  const std::string csv = slurp(res.csv_path);
  for (const char *metric :
       {"elements_small", "inverse_inequality_ratio", "extended_overlap",
        "sh_diam_ratio", "max_boundary_length_ratio"})
    CHECK(csv.find(metric) != std::string::npos);
  bool has_svg = false;
  for (const auto &entry : std::filesystem::directory_iterator("/tmp/spx_diag"))
    if (entry.path().extension() == ".svg") has_svg = true;
  CHECK(has_svg);
}

TEST_CASE("plots: empty data errors without writing") {
  const std::string csv = "/tmp/spx_empty.csv";
  std::ofstream(csv) << csv_header();
  CHECK_THROWS(emit_plots(csv, "/tmp/spx_plots_empty"));
  CHECK(!std::filesystem::exists("/tmp/spx_plots_empty/convergence_L2.svg"));
}

TEST_CASE("plots: malformed csv reports the line number") {
  const std::string csv = "/tmp/spx_bad.csv";
  std::ofstream(csv) << csv_header() << "convergence,2,oops\n";
  try {
    emit_plots(csv, "/tmp/spx_plots_bad");
    FAIL("expected parse error");
  } catch (const std::exception &e) {
    CHECK(std::string(e.what()).find(":2:") != std::string::npos);
  }
}

TEST_CASE("plots: single series and synthetic slope-2 guide overlap") {
  // synthetic worst-case rows with errL2 = h^2
  const std::string csv = "/tmp/spx_synth.csv";
  {
    std::ofstream out(csv);
    out << csv_header();
    for (double h : {0.25, 0.125, 0.0625, 0.03125}) {
      StudyRecord r;
      r.study = "convergence";
      r.p = 1;
      r.gamma = 1.0;
      r.h = h;
      r.shift_id = -1;
      r.status = "worst";
      r.errL2 = h * h;
      out << csv_row(r);
    }
  }
  const auto written = emit_plots(csv, "/tmp/spx_plots_synth");
  REQUIRE(written.size() == 1);  // only the L2 metric has data
  CHECK(written[0].find("convergence_L2.svg") != std::string::npos);

  // the guide line of slope 2 must coincide with the series in pixel space
  LogLogPlot plot;
  plot.series.push_back({"s", {0.25, 0.125, 0.0625, 0.03125},
                         {0.0625, 0.015625, 0.00390625, 0.0009765625}});
  const auto m = plot.mapping();
  const auto &s = plot.series[0];
  const double x1 = s.x.back(), y1 = s.y.back();
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    const double guide_y = y1 * std::pow(s.x[i] / x1, 2.0);
    CHECK(std::abs(m.y_to_px(guide_y) - m.y_to_px(s.y[i])) < 0.5);  // sub-pixel
  }
}

TEST_CASE("failed cases are recorded and the study continues") {
  auto cfg = tiny_config("convergence", "/tmp/spx_fail");
  cfg.hs = {0.125};
  // force the iterative path with a tiny penalty: the indefinite form
  // breaks PCG, which must be recorded as a failure, not a crash
  cfg.beta = 1e-4;
  cfg.dense_threshold = 0;
  bool threw = false;
  StudyResult res;
  try {
    res = run_convergence(cfg);
  } catch (...) {
    threw = true;
  }
  CHECK(!threw);
  int failed = 0, total = 0;
  for (const auto &r : res.records)
    if (r.shift_id >= 0) {
      ++total;
      if (r.status != "ok") ++failed;
    }
  CHECK(total == 2);
  CHECK(failed >= 1);
}

TEST_CASE("invalid configs are rejected") {
  auto cfg = tiny_config("convergence", "/tmp/spx_invalid");
  cfg.hs = {0.0625, 0.125};  // not decreasing
  CHECK_THROWS(run_convergence(cfg));
  cfg = tiny_config("convergence", "/tmp/spx_invalid");
  cfg.shifts = 0;
  CHECK_THROWS(run_convergence(cfg));
  cfg = tiny_config("convergence", "/tmp/spx_invalid");
  cfg.gammas = {-0.5};
  CHECK_THROWS(run_convergence(cfg));
}
