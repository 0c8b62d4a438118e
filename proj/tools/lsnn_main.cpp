// Command-line driver: training runs, table reproduction, CPWL checks,
// gradient verification and grid dumps, all emitting deterministic CSV files.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "lsnn/cpwl.hpp"
#include "lsnn/csv.hpp"
#include "lsnn/gradcheck.hpp"
#include "lsnn/metrics.hpp"
#include "lsnn/problem.hpp"
#include "lsnn/train.hpp"

namespace fs = std::filesystem;
using namespace lsnn;

namespace {

struct Preset {
  double h = 0.02;
  int total = 60000;
  int warmup = 2000;
  int restarts = 10;
  double lr = 0.004;
  int halve = 50000;
  std::string shapes;  // the published 2-layer / 3-layer pair
};

Preset preset_for(const std::string& problem, bool paper) {
  Preset p;
  p.lr = 0.004;
  p.halve = 50000;
  p.restarts = 10;
  if (paper) {
    p.h = 0.01;
    p.warmup = 5000;
  }
  if (problem == "2d-three-segment") {
    p.shapes = "2-300-1,2-5-5-1";
    if (paper) p.total = 200000;
  } else if (problem == "2d-four-segment") {
    p.shapes = "2-300-1,2-6-6-1";
    if (paper) p.total = 200000;
  } else if (problem == "2d-curve") {
    p.shapes = "2-3000-1,2-60-60-1";
    if (paper) p.total = 300000;
  } else if (problem == "2d-curve-uhat") {
    p.shapes = "2-4000-1,2-65-65-1";
    if (paper) p.total = 200000;
  } else if (problem == "3d-plane") {
    p.shapes = "3-300-1,3-5-5-1";
    if (!paper) p.h = 0.025;
    if (paper) p.total = 100000;
  } else if (problem == "3d-cylinder") {
    p.shapes = "3-1500-1,3-50-50-1";
    if (!paper) p.h = 0.025;
    if (paper) p.total = 150000;
  } else if (problem == "remark-fit") {
    p.shapes = "2-8-1,2-4-4-1";
    p.h = 0.01;
    if (!paper) {
      p.total = 30000;
      p.warmup = 1000;
      p.halve = 3000;
    } else {
      p.total = 200000;
    }
  } else {
    throw std::invalid_argument("unknown problem id: " + problem);
  }
  return p;
}

struct RunConfig {
  std::string problem;
  std::string shape;
  std::string preset = "desk";
  std::string outdir = "lsnn-out";
  double h = -1.0;
  double rho = -1.0;
  double lr = -1.0;
  int halve = -1;
  int total = -1;
  int restarts = -1;
  int warmup = -1;
  std::uint64_t seed = 1;
  int checkpoint_every = 10000;
  bool deterministic = true;

  void resolve() {
    if (preset != "desk" && preset != "paper") {
      throw std::invalid_argument("preset must be 'desk' or 'paper'");
    }
    const Preset base = preset_for(problem, preset == "paper");
    if (h < 0.0) h = base.h;
    if (rho < 0.0) rho = h / 4.0;
    if (lr < 0.0) lr = base.lr;
    if (halve < 0) halve = base.halve;
    if (total < 0) total = base.total;
    if (restarts < 0) restarts = base.restarts;
    if (warmup < 0) warmup = base.warmup;
  }

  TrainSchedule schedule() const {
    TrainSchedule s;
    s.initial_lr = lr;
    s.halving_period = halve;
    s.total_iters = total;
    s.warmup_restarts = restarts;
    s.warmup_iters = warmup;
    s.validate();
    return s;
  }
};

void add_train_options(CLI::App* cmd, RunConfig& cfg, bool with_shape) {
  cmd->set_help_flag("--help", "print help");
  cmd->add_option("--problem", cfg.problem, "problem id (see `defaults`)")->required();
  if (with_shape) cmd->add_option("--shape", cfg.shape, "network structure, e.g. 2-5-5-1")->required();
  cmd->add_option("--preset", cfg.preset, "desk or paper scale defaults");
  cmd->add_option("--h", cfg.h, "mesh size (must divide the box sides)");
  cmd->add_option("--rho", cfg.rho, "finite-difference step (default h/4)");
  cmd->add_option("--lr", cfg.lr, "initial learning rate");
  cmd->add_option("--halve-every", cfg.halve, "halve the learning rate every N iterations");
  cmd->add_option("--iters", cfg.total, "total training iterations");
  cmd->add_option("--restarts", cfg.restarts, "number of warm-up restarts");
  cmd->add_option("--warmup", cfg.warmup, "iterations per warm-up restart");
  cmd->add_option("--seed", cfg.seed, "base seed; restart k uses seed+k");
  cmd->add_option("--checkpoint-every", cfg.checkpoint_every, "checkpoint cadence in iterations");
  cmd->add_option("--out", cfg.outdir, "output directory");
  cmd->add_flag("--deterministic,!--no-deterministic", cfg.deterministic,
                "fixed-order reductions (always on; kept for config files)");
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

void write_loss_csv(const std::string& path, const TrainSchedule& s,
                    const std::vector<double>& history) {
  CsvWriter csv(path);
  csv.header({"iter", "lr", "loss"});
  const int range = std::max(s.total_iters, s.warmup_iters);
  for (std::size_t i = 0; i < history.size(); ++i) {
    const int it = std::min<int>(static_cast<int>(i), range - 1);
    csv.begin_row();
    csv.cell(static_cast<long long>(i));
    csv.cell(lr_at(s, it));
    csv.cell(history[i]);
    csv.end_row();
  }
}

void write_report_row(CsvWriter& csv, const ErrorReport& rep) {
  csv.begin_row();
  csv.cell(rep.structure);
  csv.cell(rep.rel_l2);
  csv.cell(rep.rel_graph);
  csv.cell(rep.ls_ratio);
  csv.cell(static_cast<long long>(rep.parameters));
  csv.end_row();
}

const char* kReportHeader[5] = {"structure", "rel_l2", "rel_graph", "ls_ratio", "parameters"};

ErrorReport run_training(const RunConfig& cfg, const std::string& outdir) {
  const ProblemSpec problem = problem_by_id(cfg.problem);
  const NetworkShape shape = NetworkShape::parse(cfg.shape);
  const DomainMesh dmesh = build_domain_mesh(problem.domain, cfg.h);
  const InflowMesh bmesh = build_inflow_mesh(problem, cfg.h);
  const TransportConfig tcfg{cfg.rho};

  fs::create_directories(outdir);
  TrainOptions opt;
  opt.base_seed = cfg.seed;
  opt.checkpoint_every = cfg.checkpoint_every;
  opt.deterministic_reduction = cfg.deterministic;
  opt.checkpoint_cb = [&](int iter, const NetworkParams& params) {
    char name[64];
    std::snprintf(name, sizeof(name), "checkpoint_%08d.net", iter);
    params.save(outdir + "/" + name);
  };
  int next_report = 0;
  opt.progress_cb = [&](int iter, double loss) {
    if (iter >= next_report) {
      std::cerr << "iter " << iter << " loss " << loss << "\n";
      next_report += 5000;
    }
  };

  const TrainSchedule schedule = cfg.schedule();
  TrainResult result =
      multistart_train(problem, shape, schedule, dmesh, bmesh, tcfg, opt);

  result.params.save(outdir + "/params_final.net");
  write_loss_csv(outdir + "/loss.csv", schedule, result.loss_history);

  const ErrorReport rep = make_report(result.params, problem, dmesh, bmesh, tcfg);
  CsvWriter csv(outdir + "/report.csv");
  csv.header({kReportHeader[0], kReportHeader[1], kReportHeader[2], kReportHeader[3],
              kReportHeader[4]});
  write_report_row(csv, rep);
  return rep;
}

int cmd_train(const RunConfig& cfg_in) {
  RunConfig cfg = cfg_in;
  cfg.resolve();
  const ErrorReport rep = run_training(cfg, cfg.outdir);
  std::cout << rep.structure << ": rel_l2 " << dtos(rep.rel_l2) << ", rel_graph "
            << dtos(rep.rel_graph) << ", ls_ratio " << dtos(rep.ls_ratio) << ", parameters "
            << rep.parameters << "\n";
  return 0;
}

int cmd_table(const RunConfig& cfg_in, const std::string& shapes) {
  RunConfig cfg = cfg_in;
  cfg.resolve();
  fs::create_directories(cfg.outdir);
  CsvWriter csv(cfg.outdir + "/table.csv");
  csv.header({kReportHeader[0], kReportHeader[1], kReportHeader[2], kReportHeader[3],
              kReportHeader[4]});
  for (const std::string& shape : split_list(shapes)) {
    RunConfig row = cfg;
    row.shape = shape;
    const ErrorReport rep = run_training(row, cfg.outdir + "/" + shape);
    write_report_row(csv, rep);
    std::cout << "done " << shape << ": rel_l2 " << dtos(rep.rel_l2) << "\n";
  }
  return 0;
}

int cmd_cpwl_check(const std::string& eps_list, bool remark_fit, double remark_eps,
                   const std::string& outdir, std::uint64_t seed) {
  fs::create_directories(outdir);

  // Transition-layer measurement vs the a-priori bound on the diagonal
  // interface. The velocity is the interface tangent plus the largest normal
  // drift the estimate admits (|beta - beta_i| = eps).
  StepFunctionSpec spec = step_spec_diagonal();
  const double s2 = std::sqrt(2.0);
  CsvWriter csv(outdir + "/cpwl_check.csv");
  csv.header({"eps", "measured", "measured_l2", "bound"});
  for (const std::string& etext : split_list(eps_list)) {
    const double eps = std::stod(etext);
    auto beta = [&, eps](const Vec&) {
      return (vec2(1.0 / s2, 1.0 / s2) + eps * vec2(-1.0 / s2, 1.0 / s2)).eval();
    };
    const double h = 1.0 / std::ceil(8.0 / eps);
    DomainMesh dmesh = build_domain_mesh(spec.domain, h);
    const TransitionError err = measure_transition_error(spec, eps, beta, dmesh);
    const double bound = transition_error_bound(spec, eps);
    csv.row({eps, err.total, err.l2_part, bound});
    std::cout << "eps " << dtos(eps) << ": measured " << dtos(err.total) << " <= bound "
              << dtos(bound) << (err.total <= bound ? " ok" : " VIOLATED") << "\n";
  }

  // streamline jump oracle for the whole catalog
  for (const auto& id : problem_ids()) {
    if (id == "remark-fit") continue;
    const ProblemSpec p = problem_by_id(id);
    const JumpTrace trace = characteristic_jump(p, p.interface->x0, p.interface->s_inside, 10000);
    CsvWriter jcsv(outdir + "/jump_" + id + ".csv");
    if (p.dim == 2) {
      jcsv.header({"s", "x", "y", "jump"});
    } else {
      jcsv.header({"s", "x", "y", "z", "jump"});
    }
    for (Eigen::Index i = 0; i < trace.s.size(); ++i) {
      jcsv.begin_row();
      jcsv.cell(trace.s[i]);
      for (int c = 0; c < p.dim; ++c) jcsv.cell(trace.points(i, c));
      jcsv.cell(trace.jump[i]);
      jcsv.end_row();
    }
  }

  if (remark_fit) {
    // depth comparison when fitting the sharp transition target
    RunConfig cfg;
    cfg.problem = "remark-fit";
    cfg.preset = "desk";
    cfg.seed = seed;
    cfg.resolve();
    ProblemSpec fitprob = make_remark_fit(remark_eps);
    DomainMesh dmesh = build_domain_mesh(fitprob.domain, cfg.h);
    InflowMesh bmesh = build_inflow_mesh(fitprob, cfg.h);
    CsvWriter fcsv(outdir + "/remark_fit.csv");
    fcsv.header({"structure", "rel_l2"});
    for (const std::string& shape : {std::string("2-8-1"), std::string("2-4-4-1")}) {
      TrainOptions opt;
      opt.base_seed = cfg.seed;
      TrainResult r = multistart_train(fitprob, NetworkShape::parse(shape), cfg.schedule(), dmesh,
                                       bmesh, TransportConfig{cfg.rho}, opt);
      const double rel = relative_l2_error(r.params, fitprob, dmesh);
      fcsv.begin_row();
      fcsv.cell(shape);
      fcsv.cell(rel);
      fcsv.end_row();
      std::cout << shape << " fit rel_l2 " << dtos(rel) << "\n";
    }
  }
  return 0;
}

int cmd_gradcheck(const std::string& problem_id, const std::string& shape_text, double h,
                  int draws, std::uint64_t seed, bool corrupt) {
  const ProblemSpec problem = problem_by_id(problem_id);
  const std::string shape_str =
      shape_text.empty() ? (problem.dim == 2 ? "2-5-5-1" : "3-5-5-1") : shape_text;
  const GradCheckResult res = gradcheck(problem, NetworkShape::parse(shape_str), h, draws, seed,
                                        corrupt ? 1e-2 : 0.0);
  for (int i = 0; i < res.draws; ++i) {
    std::cout << "draw " << i << " (seed " << res.seeds_used[static_cast<std::size_t>(i)]
              << "): max rel deviation " << dtos(res.per_draw[static_cast<std::size_t>(i)])
              << "\n";
  }
  const bool pass = res.max_rel_dev < 1e-5;
  std::cout << (pass ? "PASS" : "FAIL") << " max rel deviation " << dtos(res.max_rel_dev)
            << " (threshold 1e-5)\n";
  return pass ? 0 : 3;
}

int cmd_dump(const std::string& params_path, const std::string& problem_id, int grid,
             const std::string& layers_text, int trace_samples, double z_slice,
             const std::string& outdir, double mesh_h) {
  const ProblemSpec problem = problem_by_id(problem_id);
  const NetworkParams params = NetworkParams::load(params_path);
  if (params.shape().input_dim() != problem.dim) {
    throw std::invalid_argument("params dimension does not match the problem");
  }
  fs::create_directories(outdir);
  const Box& box = problem.domain;
  const int d = problem.dim;

  {  // solution grid (z slice in 3-D)
    const Eigen::Index n = static_cast<Eigen::Index>(grid) * grid;
    Eigen::MatrixXd X(n, d);
    for (int j = 0; j < grid; ++j) {
      for (int i = 0; i < grid; ++i) {
        const Eigen::Index r = static_cast<Eigen::Index>(j) * grid + i;
        X(r, 0) = box.lo[0] + box.side(0) * i / (grid - 1);
        X(r, 1) = box.lo[1] + box.side(1) * j / (grid - 1);
        if (d == 3) X(r, 2) = z_slice;
      }
    }
    const Eigen::VectorXd v = batch_values(params, X);
    CsvWriter csv(outdir + "/solution_grid.csv");
    if (d == 2) {
      csv.header({"x", "y", "u_exact", "u_net"});
    } else {
      csv.header({"x", "y", "z", "u_exact", "u_net"});
    }
    for (Eigen::Index r = 0; r < n; ++r) {
      csv.begin_row();
      for (int c = 0; c < d; ++c) csv.cell(X(r, c));
      csv.cell(problem.exact_u(X.row(r).transpose()));
      csv.cell(v[r]);
      csv.end_row();
    }
  }

  {  // trace on the diagonal y = x
    CsvWriter csv(outdir + "/trace_diag.csv");
    if (d == 2) {
      csv.header({"t", "x", "y", "u_net", "u_exact"});
    } else {
      csv.header({"t", "x", "y", "z", "u_net", "u_exact"});
    }
    for (int i = 0; i < trace_samples; ++i) {
      const double t = static_cast<double>(i) / (trace_samples - 1);
      Vec x(d);
      x[0] = box.lo[0] + box.side(0) * t;
      x[1] = box.lo[1] + box.side(1) * t;
      if (d == 3) x[2] = z_slice;
      csv.begin_row();
      csv.cell(t);
      for (int c = 0; c < d; ++c) csv.cell(x[c]);
      csv.cell(forward(params, x));
      csv.cell(problem.exact_u(x));
      csv.end_row();
    }
  }

  for (const std::string& ltext : split_list(layers_text)) {
    const int layer = std::stoi(ltext);
    const BreakingLineSet set = breaking_lines(params, layer, box, grid, -1.0, z_slice);
    CsvWriter csv(outdir + "/breaking_layer" + std::to_string(layer) + ".csv");
    if (d == 2) {
      csv.header({"x", "y"});
    } else {
      csv.header({"x", "y", "z"});
    }
    for (Eigen::Index r = 0; r < set.points.rows(); ++r) {
      csv.begin_row();
      for (int c = 0; c < d; ++c) csv.cell(set.points(r, c));
      csv.end_row();
    }
  }

  if (mesh_h > 0.0) {  // quadrature meshes, for debugging
    DomainMesh dmesh = build_domain_mesh(box, mesh_h);
    CsvWriter dcsv(outdir + "/domain_mesh.csv");
    dcsv.header(d == 2 ? std::initializer_list<const char*>{"x", "y", "weight"}
                       : std::initializer_list<const char*>{"x", "y", "z", "weight"});
    for (Eigen::Index r = 0; r < dmesh.size(); ++r) {
      dcsv.begin_row();
      for (int c = 0; c < d; ++c) dcsv.cell(dmesh.points(r, c));
      dcsv.cell(dmesh.cell_weight);
      dcsv.end_row();
    }
    InflowMesh bmesh = build_inflow_mesh(problem, mesh_h);
    CsvWriter bcsv(outdir + "/inflow_mesh.csv");
    bcsv.header(d == 2 ? std::initializer_list<const char*>{"x", "y", "weight"}
                       : std::initializer_list<const char*>{"x", "y", "z", "weight"});
    for (Eigen::Index r = 0; r < bmesh.size(); ++r) {
      bcsv.begin_row();
      for (int c = 0; c < d; ++c) bcsv.cell(bmesh.points(r, c));
      bcsv.cell(bmesh.weights[r]);
      bcsv.end_row();
    }
  }
  return 0;
}

int cmd_defaults() {
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return std::string(buf);
  };
  std::cout << "global: seed=1 rho=h/4 checkpoint_every=10000 deterministic=1\n";
  for (const auto& id : problem_ids()) {
    for (const bool paper : {false, true}) {
      const Preset p = preset_for(id, paper);
      std::cout << id << (paper ? " paper" : " desk") << ": h=" << num(p.h)
                << " lr=" << num(p.lr) << " halve_every=" << p.halve << " iters=" << p.total
                << " warmup=" << p.warmup << " restarts=" << p.restarts
                << " table_shapes=" << p.shapes << "\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"least-squares ReLU network solver for advection-reaction problems"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print help");  // frees -h / --h for the mesh size
  app.set_config("--config", "", "read options from an INI file");

  RunConfig train_cfg;
  CLI::App* train = app.add_subcommand("train", "train one network and report its errors");
  add_train_options(train, train_cfg, true);

  RunConfig table_cfg;
  std::string table_shapes;
  CLI::App* table = app.add_subcommand("table", "reproduce a table: one run per structure");
  add_train_options(table, table_cfg, false);
  table->add_option("--shapes", table_shapes, "comma-separated structures (may be empty)");

  std::string eps_list = "0.1,0.04,0.01";
  bool remark_fit = false;
  double remark_eps = 0.2;
  std::string cpwl_out = "lsnn-out";
  std::uint64_t cpwl_seed = 1;
  CLI::App* cpwl = app.add_subcommand("cpwl-check", "transition-layer error vs the bound");
  cpwl->add_option("--eps", eps_list, "comma-separated transition widths");
  cpwl->add_flag("--remark-fit", remark_fit, "also run the depth comparison fit");
  cpwl->add_option("--remark-eps", remark_eps, "target width for the fit");
  cpwl->add_option("--seed", cpwl_seed, "base seed for the fit");
  cpwl->add_option("--out", cpwl_out, "output directory");

  std::string gc_problem, gc_shape;
  double gc_h = 0.1;
  int gc_draws = 1;
  std::uint64_t gc_seed = 1;
  bool gc_corrupt = false;
  CLI::App* gc = app.add_subcommand("grad-check", "analytic gradient vs finite differences");
  gc->set_help_flag("--help", "print help");
  gc->add_option("--problem", gc_problem, "problem id")->required();
  gc->add_option("--shape", gc_shape, "network structure (defaults to d-5-5-1)");
  gc->add_option("--h", gc_h, "mesh size for the check");
  gc->add_option("--draws", gc_draws, "number of random networks");
  gc->add_option("--seed", gc_seed, "first seed");
  gc->add_flag("--corrupt", gc_corrupt, "perturb the gradient (negative control)")
      ->group("");  // hidden

  std::string dp_params, dp_problem, dp_layers = "1,2", dp_out = "lsnn-out";
  int dp_grid = 201, dp_trace = 1001;
  double dp_z = 0.5, dp_mesh_h = -1.0;
  CLI::App* dump = app.add_subcommand("dump", "solution grid, diagonal trace, breaking lines");
  dump->add_option("--params", dp_params, "trained parameter file")->required();
  dump->add_option("--problem", dp_problem, "problem id")->required();
  dump->add_option("--grid", dp_grid, "lattice resolution per axis");
  dump->add_option("--layers", dp_layers, "layers for breaking lines");
  dump->add_option("--trace-samples", dp_trace, "samples along the diagonal");
  dump->add_option("--z-slice", dp_z, "slice height for 3-D problems");
  dump->add_option("--mesh-h", dp_mesh_h, "also dump the quadrature meshes at this h");
  dump->add_option("--out", dp_out, "output directory");

  CLI::App* defaults = app.add_subcommand("defaults", "print every preset and default");

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) return cmd_train(train_cfg);
    if (table->parsed()) return cmd_table(table_cfg, table_shapes);
    if (cpwl->parsed()) return cmd_cpwl_check(eps_list, remark_fit, remark_eps, cpwl_out, cpwl_seed);
    if (gc->parsed()) return cmd_gradcheck(gc_problem, gc_shape, gc_h, gc_draws, gc_seed, gc_corrupt);
    if (dump->parsed())
      return cmd_dump(dp_params, dp_problem, dp_grid, dp_layers, dp_trace, dp_z, dp_out, dp_mesh_h);
    if (defaults->parsed()) return cmd_defaults();
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
