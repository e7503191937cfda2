// Command-line driver for the trimmed-spline extension studies.

#include <CLI11.hpp>
#include <cstdio>
#include <string>
#include <vector>

#include "spx/study.hpp"

namespace {

struct CliState {
  spx::StudyConfig cfg;
  std::vector<double> gamma_flags;
  std::vector<double> h_flags;
  std::string weights_flag;
};

void add_study_options(CLI::App *cmd, CliState &st) {
  cmd->set_help_flag("--help", "print help");  // frees -h / --h for mesh sizes
  cmd->add_option("--domain", st.cfg.domain,
                  "bean | circle | cone-circle | <boundary.json>");
  cmd->add_option("--p", st.cfg.p, "spline degree (1..3)")->check(CLI::Range(1, 3));
  cmd->add_option("--gamma", st.gamma_flags, "large-element threshold(s)");
  cmd->add_option("--h", st.h_flags, "mesh size(s), descending");
  cmd->add_option("--shifts", st.cfg.shifts, "mesh shifts per h")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--beta", st.cfg.beta, "Nitsche penalty (default 25 p^2)");
  cmd->add_option("--weights", st.weights_flag, "cut-area | uniform | single");
  cmd->add_option("--quad-order", st.cfg.quad_order, "Gauss points per direction");
  cmd->add_option("--seed", st.cfg.seed, "shift RNG seed");
  cmd->add_option("--out", st.cfg.out_dir, "output directory");
  cmd->add_option("--threads", st.cfg.threads, "worker threads (0 = auto)");
  cmd->add_option("--dense-cap", st.cfg.dense_cap,
                  "largest matrix for dense condition numbers");
  cmd->add_option("--dense-threshold", st.cfg.dense_threshold,
                  "largest reduced system solved densely");
  cmd->add_option("--segments-per-crossing", st.cfg.segments_per_crossing,
                  "boundary polyline resolution per crossed element");
  cmd->add_option("--boundary-segments", st.cfg.boundary_segments,
                  "absolute boundary polyline segment count (overrides)");
  cmd->add_option("--sh-radius", st.cfg.sh_radius,
                  "association search radius in elements (0 = p+1)");
  cmd->add_flag("--no-timing", [&st](std::size_t) { st.cfg.timing = false; },
                "write zero walltimes for byte-reproducible CSV output");
  cmd->add_flag("--dump-matrices", st.cfg.dump_matrices,
                "write MatrixMarket dumps of the first case");
  cmd->add_flag("--debug-svg", st.cfg.debug_svg,
                "write partition/extension SVG figures (diagnostics)");
}

void apply_flag_overrides(CliState &st) {
  if (!st.gamma_flags.empty()) st.cfg.gammas = st.gamma_flags;
  if (!st.h_flags.empty()) st.cfg.hs = st.h_flags;
  if (!st.weights_flag.empty()) {
    if (st.weights_flag == "cut-area") st.cfg.weights = spx::WeightMode::CutArea;
    else if (st.weights_flag == "uniform") st.cfg.weights = spx::WeightMode::Uniform;
    else if (st.weights_flag == "single") st.cfg.weights = spx::WeightMode::SingleElement;
    else throw CLI::ValidationError("--weights", "unknown mode " + st.weights_flag);
  }
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Discrete extension operator for trimmed spline spaces: "
               "convergence, condition-number, and surface studies"};
  app.require_subcommand(1);

  CliState st;
  // a config file provides defaults; explicit flags override it
  std::string config_path;
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--config") config_path = argv[i + 1];
  if (!config_path.empty()) {
    try {
      st.cfg.apply_json_file(config_path);
    } catch (const std::exception &e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return 1;
    }
  }
  std::string config_sink;

  CLI::App *conv = app.add_subcommand("convergence", "worst-case error sweep");
  CLI::App *cond = app.add_subcommand("condition", "worst-case condition numbers");
  CLI::App *surf = app.add_subcommand("surface", "mapped-domain example");
  CLI::App *diag = app.add_subcommand("diagnostics", "partition and operator metrics");
  for (CLI::App *cmd : {conv, cond, surf, diag}) {
    add_study_options(cmd, st);
    cmd->add_option("--config", config_sink, "JSON config file (flags override)");
  }

  CLI::App *plot = app.add_subcommand("plot", "render SVG figures from a study CSV");
  std::string plot_csv, plot_out = "out";
  plot->add_option("csv", plot_csv, "study CSV file")->required();
  plot->add_option("--out", plot_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (plot->parsed()) {
      for (const auto &path : spx::emit_plots(plot_csv, plot_out))
        std::printf("wrote %s\n", path.c_str());
      return 0;
    }
    apply_flag_overrides(st);
    if (conv->parsed()) st.cfg.study = "convergence";
    if (cond->parsed()) st.cfg.study = "condition";
    if (surf->parsed()) st.cfg.study = "surface";
    if (diag->parsed()) st.cfg.study = "diagnostics";
    const auto result = spx::run_study(st.cfg);
    std::printf("wrote %s (%zu records)\n", result.csv_path.c_str(),
                result.records.size());
    if (st.cfg.study == "convergence" || st.cfg.study == "condition") {
      for (const auto &r : result.records)
        if (r.shift_id == -2)
          std::printf("p=%d gamma=%g slopes: L2=%.3f H1=%.3f cond=%.3f cond_diag=%.3f\n",
                      r.p, r.gamma, r.errL2, r.errH1, r.cond_raw, r.cond_diag);
    }
  } catch (const std::exception &e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
