#include "spx/study.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "spx/extension.hpp"
#include "spx/nitsche.hpp"
#include "spx/svg.hpp"

namespace spx {

namespace {

std::string fmt17(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

WeightMode weight_mode_from_string(const std::string &s) {
  if (s == "cut-area") return WeightMode::CutArea;
  if (s == "uniform") return WeightMode::Uniform;
  if (s == "single") return WeightMode::SingleElement;
  throw std::runtime_error("unknown weight mode: " + s);
}

std::string weight_mode_to_string(WeightMode m) {
  switch (m) {
    case WeightMode::CutArea: return "cut-area";
    case WeightMode::Uniform: return "uniform";
    case WeightMode::SingleElement: return "single";
  }
  return "cut-area";
}

void parallel_for(int n, int threads, const std::function<void(int)> &fn) {
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) fn(i);
    });
  for (auto &th : pool) th.join();
}

/// Manufactured problem attached to a domain: the trim curve, the exact
/// reference-domain solution with gradient, the data (f, g), and the map.
struct ProblemSpec {
  BoundaryCurve curve;
  ScalarField exact;
  std::function<Vec2(const Vec2 &)> exact_grad;
  PoissonData data;
  SurfaceMap map = SurfaceMap::identity();
};

ScalarField ansatz_u() {
  return [](const Vec2 &x) {
    return (std::sin(2 * x.x) + x.x * std::cos(3 * x.y)) / 10.0;
  };
}

std::function<Vec2(const Vec2 &)> ansatz_grad() {
  return [](const Vec2 &x) {
    return Vec2{(2 * std::cos(2 * x.x) + std::cos(3 * x.y)) / 10.0,
                -3.0 * x.x * std::sin(3 * x.y) / 10.0};
  };
}

ScalarField ansatz_f() {
  return [](const Vec2 &x) {
    return (4 * std::sin(2 * x.x) + 9 * x.x * std::cos(3 * x.y)) / 10.0;
  };
}

ProblemSpec make_problem(const StudyConfig &cfg) {
  if (cfg.domain == "bean") {
    return {bean_domain(), ansatz_u(), ansatz_grad(), {ansatz_f(), ansatz_u()}};
  }
  if (cfg.domain == "circle") {
    return {circle_domain({0.0, 0.0}, 0.8), ansatz_u(), ansatz_grad(),
            {ansatz_f(), ansatz_u()}};
  }
  if (cfg.domain == "cone-circle") {
    SurfaceMap map = cone_map();
    auto u = ansatz_u();
    auto gu = ansatz_grad();
    auto f = manufactured_surface_rhs(map, u, gu);
    return {circle_domain({0.5, 0.5}, 0.35), u, gu, {f, u}, map};
  }
  // custom boundary from JSON, flat ansatz problem
  return {curve_from_json_file(cfg.domain), ansatz_u(), ansatz_grad(),
          {ansatz_f(), ansatz_u()}};
}

/// One (h, gamma, shift) solve shared by the study kinds.
struct CaseContext {
  BackgroundMesh mesh;
  SplineSpace space;
  TrimmedDomain dom;
  ActiveMesh am;
  ExtensionPartition part;
  WeightScheme wscheme;
  CoeffMatrix Eh;

  CaseContext(const ProblemSpec &prob, const StudyConfig &cfg, double h,
              double gamma, const Vec2 &shift)
      : mesh(BackgroundMesh::covering(prob.curve.bounding_box(), h, cfg.p + 2, shift)),
        space(mesh, cfg.p),
        dom(prob.curve, mesh,
            TrimOptions{cfg.quad_order_value(), cfg.segments_per_crossing,
                        cfg.boundary_segments}),
        am(active_extract(space, dom)),
        part(partition(am, dom, gamma)) {
    build_Sh(part, am, dom, cfg.sh_radius);
    wscheme = make_weights(cfg.weights, am, part);
    Eh = assemble_Eh(part, am, dom, wscheme);
  }
};

void write_file(const std::string &path, const std::string &content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

void write_manifest(const StudyConfig &cfg, const std::string &csv_path,
                    int record_count) {
  nlohmann::json j;
  j["tool"] = "spx";
  j["version"] = "1.0.0";
  j["study"] = cfg.study;
  j["config"] = nlohmann::json::parse(cfg.to_json());
  j["config_hash"] = cfg.config_hash();
  j["csv"] = std::filesystem::path(csv_path).filename().string();
  j["records"] = record_count;
  write_file((std::filesystem::path(cfg.out_dir) / "run-manifest.json").string(),
             j.dump(2) + "\n");
}

void validate(const StudyConfig &cfg) {
  if (cfg.shifts < 1) throw std::runtime_error("config: shifts must be >= 1");
  if (cfg.hs.empty()) throw std::runtime_error("config: no mesh sizes given");
  for (double g : cfg.gammas)
    if (g < 0.0) throw std::runtime_error("config: gamma must be >= 0");
  for (std::size_t i = 1; i < cfg.hs.size(); ++i)
    if (!(cfg.hs[i] < cfg.hs[i - 1]))
      throw std::runtime_error("config: h values must be strictly decreasing");
}

std::vector<std::vector<Vec2>> draw_shifts(const StudyConfig &cfg) {
  validate(cfg);
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::vector<Vec2>> out(cfg.hs.size());
  for (std::size_t hi = 0; hi < cfg.hs.size(); ++hi) {
    out[hi].resize(cfg.shifts);
    for (int s = 0; s < cfg.shifts; ++s)
      out[hi][s] = {u(rng) * cfg.hs[hi], u(rng) * cfg.hs[hi]};
  }
  return out;
}

struct CaseGrid {
  struct Item {
    std::size_t hi;
    std::size_t gi;
    int shift_id;
    Vec2 shift;
  };
  std::vector<Item> items;
};

CaseGrid make_grid(const StudyConfig &cfg, const std::vector<std::vector<Vec2>> &shifts) {
  CaseGrid grid;
  for (std::size_t hi = 0; hi < cfg.hs.size(); ++hi)
    for (std::size_t gi = 0; gi < cfg.gammas.size(); ++gi)
      for (int s = 0; s < cfg.shifts; ++s)
        grid.items.push_back({hi, gi, s, shifts[hi][s]});
  return grid;
}

/// Appends worst-case rows (shift_id = -1) and slope rows (shift_id = -2)
/// per (gamma) series; slopes are fitted over the finest three h of the
/// worst-case values.
void aggregate(const StudyConfig &cfg, std::vector<StudyRecord> &records) {
  for (double gamma : cfg.gammas) {
    std::vector<double> hs_ok;
    std::vector<StudyRecord> worst_rows;
    for (double h : cfg.hs) {
      StudyRecord w;
      w.study = cfg.study;
      w.p = cfg.p;
      w.gamma = gamma;
      w.h = h;
      w.shift_id = -1;
      w.status = "worst";
      bool any = false;
      for (const auto &r : records) {
        if (r.shift_id < 0 || r.gamma != gamma || r.h != h) continue;
        if (r.status != "ok") continue;
        any = true;
        w.errL2 = std::max(w.errL2, r.errL2);
        w.errH1 = std::max(w.errH1, r.errH1);
        w.cond_raw = std::max(w.cond_raw, r.cond_raw);
        w.cond_diag = std::max(w.cond_diag, r.cond_diag);
        w.sh_diam_ratio = std::max(w.sh_diam_ratio, r.sh_diam_ratio);
        w.dofs_full = std::max(w.dofs_full, r.dofs_full);
        w.dofs_large = std::max(w.dofs_large, r.dofs_large);
      }
      if (any) {
        worst_rows.push_back(w);
        hs_ok.push_back(h);
      }
    }
    for (const auto &w : worst_rows) records.push_back(w);
    if (worst_rows.size() >= 2) {
      StudyRecord s;
      s.study = cfg.study;
      s.p = cfg.p;
      s.gamma = gamma;
      s.h = hs_ok.back();
      s.shift_id = -2;
      s.status = "slope";
      auto series = [&](auto get) {
        std::vector<double> ys;
        for (const auto &w : worst_rows) ys.push_back(get(w));
        return ys;
      };
      const auto l2 = series([](const StudyRecord &w) { return w.errL2; });
      const auto h1 = series([](const StudyRecord &w) { return w.errH1; });
      const auto cr = series([](const StudyRecord &w) { return w.cond_raw; });
      const auto cd = series([](const StudyRecord &w) { return w.cond_diag; });
      if (l2.back() > 0.0) s.errL2 = loglog_slope(hs_ok, l2);
      if (h1.back() > 0.0) s.errH1 = loglog_slope(hs_ok, h1);
      if (cr.back() > 0.0) s.cond_raw = loglog_slope(hs_ok, cr);
      if (cd.back() > 0.0) s.cond_diag = loglog_slope(hs_ok, cd);
      records.push_back(s);
    }
  }
}

StudyResult finalize(const StudyConfig &cfg, std::vector<StudyRecord> records,
                     const std::string &csv_name) {
  aggregate(cfg, records);
  std::filesystem::create_directories(cfg.out_dir);
  std::ostringstream os;
  os << csv_header();
  for (const auto &r : records) os << csv_row(r);
  const std::string path = (std::filesystem::path(cfg.out_dir) / csv_name).string();
  write_file(path, os.str());
  write_manifest(cfg, path, static_cast<int>(records.size()));
  return {std::move(records), path};
}

}  // namespace

double loglog_slope(const std::vector<double> &x, const std::vector<double> &y, int n) {
  const int total = static_cast<int>(x.size());
  const int use = std::min(n, total);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = total - use; i < total; ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (use * sxy - sx * sy) / (use * sxx - sx * sx);
}

std::string csv_header() {
  return "study,p,gamma,h,shift_id,shift_x,shift_y,dofs_full,dofs_large,"
         "errL2,errH1,cond_raw,cond_diag,sh_diam_ratio,status,walltime_s\n";
}

std::string csv_row(const StudyRecord &r) {
  std::ostringstream os;
  os << r.study << "," << r.p << "," << fmt17(r.gamma) << "," << fmt17(r.h) << ","
     << r.shift_id << "," << fmt17(r.shift.x) << "," << fmt17(r.shift.y) << ","
     << r.dofs_full << "," << r.dofs_large << "," << fmt17(r.errL2) << ","
     << fmt17(r.errH1) << "," << fmt17(r.cond_raw) << "," << fmt17(r.cond_diag)
     << "," << fmt17(r.sh_diam_ratio) << "," << r.status << ","
     << fmt17(r.walltime_s) << "\n";
  return os.str();
}

void StudyConfig::apply_json_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  nlohmann::json j;
  in >> j;
  if (j.contains("study")) study = j["study"].get<std::string>();
  if (j.contains("domain")) domain = j["domain"].get<std::string>();
  if (j.contains("p")) p = j["p"].get<int>();
  if (j.contains("gamma")) gammas = j["gamma"].get<std::vector<double>>();
  if (j.contains("h")) hs = j["h"].get<std::vector<double>>();
  if (j.contains("shifts")) shifts = j["shifts"].get<int>();
  if (j.contains("beta")) beta = j["beta"].get<double>();
  if (j.contains("weights")) weights = weight_mode_from_string(j["weights"]);
  if (j.contains("quad_order")) quad_order = j["quad_order"].get<int>();
  if (j.contains("seed")) seed = j["seed"].get<unsigned long long>();
  if (j.contains("out")) out_dir = j["out"].get<std::string>();
  if (j.contains("threads")) threads = j["threads"].get<int>();
  if (j.contains("dense_cap")) dense_cap = j["dense_cap"].get<int>();
  if (j.contains("dense_threshold")) dense_threshold = j["dense_threshold"].get<int>();
  if (j.contains("timing")) timing = j["timing"].get<bool>();
  if (j.contains("segments_per_crossing"))
    segments_per_crossing = j["segments_per_crossing"].get<int>();
  if (j.contains("boundary_segments"))
    boundary_segments = j["boundary_segments"].get<int>();
  if (j.contains("sh_radius")) sh_radius = j["sh_radius"].get<int>();
}

StudyConfig StudyConfig::from_json_file(const std::string &path) {
  StudyConfig cfg;
  cfg.apply_json_file(path);
  return cfg;
}

std::string StudyConfig::to_json() const {
  nlohmann::json j;
  j["study"] = study;
  j["domain"] = domain;
  j["p"] = p;
  j["gamma"] = gammas;
  j["h"] = hs;
  j["shifts"] = shifts;
  j["beta"] = beta;
  j["weights"] = weight_mode_to_string(weights);
  j["quad_order"] = quad_order;
  j["seed"] = seed;
  j["out"] = out_dir;
  j["threads"] = threads;
  j["dense_cap"] = dense_cap;
  j["dense_threshold"] = dense_threshold;
  j["timing"] = timing;
  j["segments_per_crossing"] = segments_per_crossing;
  j["boundary_segments"] = boundary_segments;
  j["sh_radius"] = sh_radius;
  return j.dump();
}

std::string StudyConfig::config_hash() const {
  const std::string s = to_json();
  unsigned long long hash = 1469598103934665603ull;
  for (unsigned char c : s) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", hash);
  return buf;
}

StudyResult run_convergence(const StudyConfig &cfg) {
  const ProblemSpec prob = make_problem(cfg);
  const auto shifts = draw_shifts(cfg);
  const CaseGrid grid = make_grid(cfg, shifts);
  std::vector<StudyRecord> records(grid.items.size());
  std::atomic<bool> dumped{false};

  parallel_for(static_cast<int>(grid.items.size()), cfg.threads, [&](int i) {
    const auto &it = grid.items[i];
    StudyRecord &r = records[i];
    r.study = cfg.study;
    r.p = cfg.p;
    r.gamma = cfg.gammas[it.gi];
    r.h = cfg.hs[it.hi];
    r.shift_id = it.shift_id;
    r.shift = it.shift;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      CaseContext cc(prob, cfg, r.h, r.gamma, it.shift);
      r.dofs_full = cc.am.dof_count();
      r.dofs_large = cc.part.large_dof_count();
      r.sh_diam_ratio = cc.part.max_sh_diam_ratio;
      const auto sys =
          assemble_nitsche(cc.am, cc.dom, prob.data, cfg.beta_value(), prob.map);
      if (cfg.dump_matrices && !dumped.exchange(true)) {
        std::filesystem::create_directories(cfg.out_dir);
        std::ofstream ma((std::filesystem::path(cfg.out_dir) / "stiffness.mtx"));
        sys.A.write_matrix_market(ma);
        std::ofstream mr((std::filesystem::path(cfg.out_dir) / "reduced.mtx"));
        triple_product(cc.Eh, sys.A).write_matrix_market(mr);
      }
      SolveOptions sopts;
      sopts.dense_threshold = cfg.dense_threshold;
      const auto res = solve_reduced(sys, cc.Eh, sopts);
      const auto err =
          error_norms(cc.am, cc.dom, res.u_full, prob.exact, prob.exact_grad);
      r.errL2 = err.l2;
      r.errH1 = err.h1_semi;
    } catch (const std::exception &e) {
      r.status = std::string("failed: ") + e.what();
      for (auto &c : r.status)
        if (c == ',' || c == '\n') c = ';';
    }
    if (cfg.timing)
      r.walltime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                         .count();
  });
  return finalize(cfg, std::move(records), "convergence.csv");
}

StudyResult run_condition(const StudyConfig &cfg) {
  const ProblemSpec prob = make_problem(cfg);
  const auto shifts = draw_shifts(cfg);
  const CaseGrid grid = make_grid(cfg, shifts);
  std::vector<StudyRecord> records(grid.items.size());

  parallel_for(static_cast<int>(grid.items.size()), cfg.threads, [&](int i) {
    const auto &it = grid.items[i];
    StudyRecord &r = records[i];
    r.study = cfg.study;
    r.p = cfg.p;
    r.gamma = cfg.gammas[it.gi];
    r.h = cfg.hs[it.hi];
    r.shift_id = it.shift_id;
    r.shift = it.shift;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      CaseContext cc(prob, cfg, r.h, r.gamma, it.shift);
      r.dofs_full = cc.am.dof_count();
      r.dofs_large = cc.part.large_dof_count();
      r.sh_diam_ratio = cc.part.max_sh_diam_ratio;
      if (cc.Eh.cols() > cfg.dense_cap) {
        r.status = "overcap";
      } else {
        const auto sys =
            assemble_nitsche(cc.am, cc.dom, prob.data, cfg.beta_value(), prob.map);
        const auto R = triple_product(cc.Eh, sys.A);
        ConditionOptions raw{Preconditioner::None, cfg.dense_cap};
        ConditionOptions diag{Preconditioner::Diagonal, cfg.dense_cap};
        r.cond_raw = condition_number(R, raw);
        r.cond_diag = condition_number(R, diag);
      }
    } catch (const std::exception &e) {
      r.status = std::string("failed: ") + e.what();
      for (auto &c : r.status)
        if (c == ',' || c == '\n') c = ';';
    }
    if (cfg.timing)
      r.walltime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                         .count();
  });
  return finalize(cfg, std::move(records), "condition.csv");
}

StudyResult run_surface(const StudyConfig &cfg) {
  const ProblemSpec prob = make_problem(cfg);
  const auto shifts = draw_shifts(cfg);
  const CaseGrid grid = make_grid(cfg, shifts);
  std::vector<StudyRecord> records(grid.items.size());
  std::atomic<bool> dumped{false};
  double boundary_residual = -1.0;
  std::mutex report_mutex;

  parallel_for(static_cast<int>(grid.items.size()), cfg.threads, [&](int i) {
    const auto &it = grid.items[i];
    StudyRecord &r = records[i];
    r.study = cfg.study;
    r.p = cfg.p;
    r.gamma = cfg.gammas[it.gi];
    r.h = cfg.hs[it.hi];
    r.shift_id = it.shift_id;
    r.shift = it.shift;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      CaseContext cc(prob, cfg, r.h, r.gamma, it.shift);
      r.dofs_full = cc.am.dof_count();
      r.dofs_large = cc.part.large_dof_count();
      r.sh_diam_ratio = cc.part.max_sh_diam_ratio;
      const auto sys =
          assemble_nitsche(cc.am, cc.dom, prob.data, cfg.beta_value(), prob.map);
      SolveOptions sopts;
      sopts.dense_threshold = cfg.dense_threshold;
      const auto res = solve_reduced(sys, cc.Eh, sopts);
      const auto err =
          error_norms(cc.am, cc.dom, res.u_full, prob.exact, prob.exact_grad);
      r.errL2 = err.l2;
      r.errH1 = err.h1_semi;

      // boundary residual and the lifted solution dump for the finest mesh
      if (it.hi + 1 == cfg.hs.size() && it.shift_id == 0 && it.gi == 0 &&
          !dumped.exchange(true)) {
        double worst = 0.0;
        std::ostringstream os;
        os << "x,y,z,u\n";
        for (int e : cc.am.elements) {
          const CutCell *cell = cc.dom.cell(e);
          for (std::size_t q = 0; q < cell->bnd_s.size(); ++q) {
            const Vec2 x = cc.mesh.to_global(e, cell->bnd_s[q]);
            worst = std::max(
                worst, std::abs(eval_spline(cc.am, res.u_full, x) - prob.data.g_d(x)));
          }
          for (std::size_t q = 0; q < cell->vol_s.size(); ++q) {
            const Vec2 x = cc.mesh.to_global(e, cell->vol_s[q]);
            const Vec3 X = prob.map.position(x);
            os << fmt17(X.x) << "," << fmt17(X.y) << "," << fmt17(X.z) << ","
               << fmt17(eval_spline(cc.am, res.u_full, x)) << "\n";
          }
        }
        std::filesystem::create_directories(cfg.out_dir);
        write_file(
            (std::filesystem::path(cfg.out_dir) / "surface_solution.csv").string(),
            os.str());
        std::lock_guard<std::mutex> lock(report_mutex);
        boundary_residual = worst;
      }
    } catch (const std::exception &e) {
      r.status = std::string("failed: ") + e.what();
      for (auto &c : r.status)
        if (c == ',' || c == '\n') c = ';';
    }
    if (cfg.timing)
      r.walltime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                         .count();
  });
  auto result = finalize(cfg, std::move(records), "surface.csv");
  nlohmann::json rep;
  rep["max_boundary_residual"] = boundary_residual;
  write_file((std::filesystem::path(cfg.out_dir) / "surface_report.json").string(),
             rep.dump(2) + "\n");
  return result;
}

StudyResult run_diagnostics(const StudyConfig &cfg) {
  const ProblemSpec prob = make_problem(cfg);
  const auto shifts = draw_shifts(cfg);
  std::filesystem::create_directories(cfg.out_dir);
  std::ostringstream os;
  os << "study,p,gamma,h,shift_id,metric,value\n";
  std::mt19937_64 seeder(cfg.seed ^ 0x9e3779b97f4a7c15ull);

  for (std::size_t hi = 0; hi < cfg.hs.size(); ++hi) {
    const double h = cfg.hs[hi];
    for (double gamma : cfg.gammas) {
      for (int s = 0; s < cfg.shifts; ++s) {
        const Vec2 shift = shifts[hi][s];
        CaseContext cc(prob, cfg, h, gamma, shift);
        auto emit = [&](const std::string &metric, double value) {
          os << cfg.study << "," << cfg.p << "," << fmt17(gamma) << "," << fmt17(h)
             << "," << s << "," << metric << "," << fmt17(value) << "\n";
        };
        emit("elements_active", cc.am.element_count());
        emit("elements_large", static_cast<double>(cc.part.large_elements.size()));
        emit("elements_small", static_cast<double>(cc.part.small_elements.size()));
        emit("dofs_full", cc.am.dof_count());
        emit("dofs_large", cc.part.large_dof_count());
        emit("sh_diam_ratio", cc.part.max_sh_diam_ratio);
        emit("inverse_inequality_ratio",
             inverse_inequality_ratio(cc.am, cc.dom, cc.Eh, 25, seeder()));
        emit("max_boundary_length_ratio", max_boundary_length_ratio(cc.am, cc.dom));
        const auto stats = extended_basis_stats(cc.part, cc.am, cc.Eh);
        emit("extended_support_diam_ratio", stats.max_support_diam_ratio);
        emit("extended_coef_bound", stats.max_sup_norm);
        emit("extended_overlap", stats.max_overlap);
        if (s == 0 && cfg.debug_svg) {
          const std::string tag = "h" + std::to_string(hi) + "_g" + fmt17(gamma);
          write_file((std::filesystem::path(cfg.out_dir) / ("partition_" + tag + ".svg"))
                         .string(),
                     render_partition_svg(cc.am, cc.dom, cc.part));
          if (!cc.part.small_elements.empty() && cc.part.large_dof_count() > 0) {
            // a column whose extension reaches small basis functions
            int col = 0;
            const auto Et = cc.Eh.transpose();
            for (int c = 0; c < Et.rows(); ++c)
              if (Et.row_ptr()[c + 1] - Et.row_ptr()[c] > 1) { col = c; break; }
            write_file((std::filesystem::path(cfg.out_dir) /
                        ("extended_basis_" + tag + ".svg"))
                           .string(),
                       render_extended_basis_svg(cc.am, cc.dom, cc.part, cc.Eh, col));
          }
        }
      }
    }
  }
  const std::string path =
      (std::filesystem::path(cfg.out_dir) / "diagnostics.csv").string();
  write_file(path, os.str());
  write_manifest(cfg, path, 0);
  return {{}, path};
}

StudyResult run_study(const StudyConfig &cfg) {
  if (cfg.study == "convergence") return run_convergence(cfg);
  if (cfg.study == "condition") return run_condition(cfg);
  if (cfg.study == "surface") return run_surface(cfg);
  if (cfg.study == "diagnostics") return run_diagnostics(cfg);
  throw std::runtime_error("unknown study kind: " + cfg.study);
}

std::vector<std::string> emit_plots(const std::string &csv_path,
                                    const std::string &out_dir) {
  std::ifstream in(csv_path);
  if (!in) throw std::runtime_error("cannot open CSV: " + csv_path);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error(csv_path + ":1: empty CSV");
  if (line != csv_header().substr(0, csv_header().size() - 1))
    throw std::runtime_error(csv_path + ":1: unexpected CSV header");
  struct Key {
    int p;
    double gamma;
    bool operator<(const Key &o) const {
      return p != o.p ? p < o.p : gamma < o.gamma;
    }
  };
  std::map<Key, std::map<double, StudyRecord>> worst;
  std::string study_name = "study";
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) f.push_back(tok);
    if (f.size() != 16)
      throw std::runtime_error(csv_path + ":" + std::to_string(lineno) +
                               ": expected 16 columns, got " + std::to_string(f.size()));
    try {
      StudyRecord r;
      r.study = f[0];
      r.p = std::stoi(f[1]);
      r.gamma = std::stod(f[2]);
      r.h = std::stod(f[3]);
      r.shift_id = std::stoi(f[4]);
      r.errL2 = std::stod(f[9]);
      r.errH1 = std::stod(f[10]);
      r.cond_raw = std::stod(f[11]);
      r.cond_diag = std::stod(f[12]);
      if (r.shift_id == -1) {
        study_name = r.study;
        worst[{r.p, r.gamma}][r.h] = r;
      }
    } catch (const std::invalid_argument &) {
      throw std::runtime_error(csv_path + ":" + std::to_string(lineno) +
                               ": malformed numeric field");
    }
  }
  if (worst.empty())
    throw std::runtime_error(csv_path + ": no worst-case rows to plot");

  std::filesystem::create_directories(out_dir);
  std::vector<std::string> written;
  struct Metric {
    const char *name;
    double StudyRecord::*field;
    const char *ylabel;
  };
  const Metric metrics[] = {{"L2", &StudyRecord::errL2, "L2 error"},
                            {"H1", &StudyRecord::errH1, "H1 seminorm error"},
                            {"cond", &StudyRecord::cond_raw, "condition number"},
                            {"cond_diag", &StudyRecord::cond_diag,
                             "condition number (diagonal scaling)"}};
  for (const auto &metric : metrics) {
    LogLogPlot plot;
    plot.title = study_name + " (" + metric.name + ")";
    plot.xlabel = "h";
    plot.ylabel = metric.ylabel;
    int max_p = 1;
    for (const auto &[key, byh] : worst) {
      PlotSeries s;
      std::ostringstream label;
      label << "p=" << key.p << " gamma=" << key.gamma;
      s.label = label.str();
      for (const auto &[h, rec] : byh) {
        const double v = rec.*(metric.field);
        if (v > 0.0) {
          s.x.push_back(h);
          s.y.push_back(v);
        }
      }
      if (!s.x.empty()) plot.series.push_back(std::move(s));
      max_p = std::max(max_p, key.p);
    }
    if (plot.series.empty()) continue;
    if (std::string(metric.name) == "L2")
      plot.guides.push_back({double(max_p + 1), "slope " + std::to_string(max_p + 1)});
    else if (std::string(metric.name) == "H1")
      plot.guides.push_back({double(max_p), "slope " + std::to_string(max_p)});
    else
      plot.guides.push_back({-2.0, "slope -2"});
    const std::string path =
        (std::filesystem::path(out_dir) / (study_name + "_" + metric.name + ".svg"))
            .string();
    plot.write(path);
    written.push_back(path);
  }
  return written;
}

}  // namespace spx
