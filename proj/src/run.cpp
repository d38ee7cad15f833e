#include "deadoil/run.hpp"

#include "deadoil/verify.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace deadoil {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

void write_json_file(const fs::path& path, const ordered_json& j) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << j.dump(2) << "\n";
}

void write_history_jsonl(const std::vector<OptimizeRecord>& hist,
                         const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  for (const auto& r : hist) {
    ordered_json j;
    j["iter"] = r.iter;
    j["J"] = r.cost;
    j["stationarity_norm"] = r.stationarity;
    j["step"] = r.step;
    os << j.dump() << "\n";
  }
}

void write_residual_jsonl(const IterationLog& log, const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  write_jsonl(log, os);
}

ordered_json grid_json(const RunConfig& cfg) {
  ordered_json g;
  g["nx"] = cfg.nx;
  g["ny"] = cfg.ny;
  g["lx"] = cfg.lx;
  g["ly"] = cfg.ly;
  return g;
}

ordered_json base_summary(const std::string& command, const RunConfig& cfg) {
  ordered_json s;
  s["command"] = command;
  s["status"] = "ok";
  s["grid"] = grid_json(cfg);
  s["model"] = cfg.model_name;
  return s;
}

int run_solve(const RunConfig& cfg, const fs::path& out) {
  ordered_json summary = base_summary("solve", cfg);
  summary["method"] = cfg.method;
  const Grid g = make_grid(cfg);
  const CoefficientModel m = make_model(cfg);
  const Field f = realize_source(g, cfg.f);
  try {
    StateResult r = cfg.method == "picard"
                        ? solve_state_picard(m, f, cfg.solver)
                        : solve_state(m, f, cfg.solver);
    write_field_csv(r.state.u, out / "u.csv");
    write_field_csv(r.state.p, out / "p.csv");
    write_residual_jsonl(r.log, out / "residual_log.jsonl");
    summary["iterations"] = r.log.empty() ? 0 : r.log.back().iter;
    summary["residual"] = r.log.empty() ? 0.0 : r.log.back().residual;
    summary["within_validity"] = within_validity(m, r.state);
    summary["outputs"] = {"u.csv", "p.csv", "residual_log.jsonl"};
    write_json_file(out / "summary.json", summary);
    return kExitOk;
  } catch (const StateSolveError& e) {
    write_residual_jsonl(e.log(), out / "residual_log.jsonl");
    summary["status"] = "nonconvergence";
    summary["error"] = e.what();
    summary["iterations"] = e.iterations();
    summary["residual"] = e.residual();
    summary["outputs"] = {"residual_log.jsonl"};
    write_json_file(out / "summary.json", summary);
    return kExitNonconvergence;
  }
}

ControlProblem build_problem(const RunConfig& cfg, const Grid& g,
                             const CoefficientModel& m) {
  ControlProblem cp;
  cp.beta1 = cfg.beta1;
  cp.q0 = cfg.q0;
  cp.eps_smooth = cfg.eps_smooth;
  using TK = RunConfig::TargetKind;
  switch (cfg.target) {
    case TK::zero:
      cp.target_u = Field(g);
      cp.target_p = Field(g);
      break;
    case TK::forward: {
      const Field ft = realize_source(g, cfg.target_control);
      StateResult r = solve_state(m, ft, cfg.solver);
      cp.target_u = r.state.u;
      cp.target_p = r.state.p;
      break;
    }
    case TK::profiles:
      cp.target_u = realize_source(g, cfg.target_u);
      cp.target_p = realize_source(g, cfg.target_p);
      break;
    case TK::files: {
      SourceSpec su, sp;
      su.kind = sp.kind = SourceSpec::Kind::file;
      su.path = cfg.target_u_file;
      sp.path = cfg.target_p_file;
      cp.target_u = realize_source(g, su);
      cp.target_p = realize_source(g, sp);
      break;
    }
  }
  return cp;
}

int run_optimize(const RunConfig& cfg, const fs::path& out) {
  ordered_json summary = base_summary("optimize", cfg);
  summary["adjoint_mode"] = cfg.adjoint_mode;
  const Grid g = make_grid(cfg);
  const CoefficientModel m = make_model(cfg);
  const ControlProblem cp = build_problem(cfg, g, m);
  const Field f0 = realize_source(g, cfg.f);
  OptimizeOptions opt;
  opt.max_outer = cfg.max_outer;
  opt.tol_stationarity = cfg.tol_stationarity;
  opt.step0 = cfg.step0;
  opt.mode = cfg.adjoint_mode == "continuous" ? AdjointMode::continuous
                                         : AdjointMode::discrete;
  try {
    OptimizeResult r = optimize(cp, m, f0, cfg.solver, opt);
    write_field_csv(r.f, out / "f.csv");
    write_field_csv(r.state.u, out / "u.csv");
    write_field_csv(r.state.p, out / "p.csv");
    write_field_csv(r.adjoint.e1, out / "e1.csv");
    write_field_csv(r.adjoint.p1, out / "p1.csv");
    write_history_jsonl(r.history, out / "history.jsonl");
    summary["iterations"] = r.history.empty() ? 0 : r.history.back().iter;
    summary["final_cost"] = r.history.empty() ? 0.0 : r.history.back().cost;
    summary["initial_stationarity"] = r.initial_stationarity;
    summary["final_stationarity"] = r.final_stationarity;
    summary["converged"] = r.converged;
    summary["outputs"] = {"f.csv",  "u.csv",          "p.csv",
                          "e1.csv", "p1.csv",         "history.jsonl"};
    write_json_file(out / "summary.json", summary);
    return kExitOk;
  } catch (const OptimizeError& e) {
    write_history_jsonl(e.history(), out / "history.jsonl");
    summary["status"] = "nonconvergence";
    summary["error"] = e.what();
    summary["iterations"] = e.iterations();
    summary["outputs"] = {"history.jsonl"};
    write_json_file(out / "summary.json", summary);
    return kExitNonconvergence;
  }
}

int run_verify(const RunConfig& cfg, const fs::path& out, std::uint64_t seed) {
  ordered_json summary = base_summary("verify", cfg);
  summary["seed"] = seed;
  const SolverSettings st = cfg.solver;
  std::vector<VerificationReport> reports;
  for (const auto& name : cfg.verify_cases) {
    VerificationReport r;
    try {
      if (name == "pressure_mms") r = mms_pressure(cfg.pressure_grids, st);
      else if (name == "coupled_mms") r = mms_coupled(cfg.coupled_grids, st);
      else if (name == "taylor")
        r = taylor_remainder(cfg.taylor_samples, cfg.taylor_grid, seed, st);
      else if (name == "gradient")
        r = gradient_check(cfg.gradient_grid, cfg.gradient_samples, seed, st);
      else r = adjoint_consistency(cfg.adjoint_grids, st);
    } catch (const NonconvergenceError& e) {
      r.name = name;
      r.pass = false;
      r.seed = seed;
      r.details = {{"error", e.what()}};
    }
    reports.push_back(r);
    write_json_file(out / ("report_" + name + ".json"), to_json(r));
  }
  bool all_pass = true;
  ordered_json cases = ordered_json::array();
  ordered_json outputs = ordered_json::array();
  for (const auto& r : reports) {
    all_pass = all_pass && r.pass;
    cases.push_back({{"name", r.name}, {"pass", r.pass}});
    outputs.push_back("report_" + r.name + ".json");
  }
  summary["status"] = all_pass ? "ok" : "verification-failure";
  summary["cases"] = cases;
  summary["all_pass"] = all_pass;
  summary["outputs"] = outputs;
  write_json_file(out / "summary.json", summary);
  return all_pass ? kExitOk : kExitVerificationFailure;
}

}  // namespace

int run_subcommand(const std::string& command, const RunConfig& cfg,
                   const std::string& output_dir, std::uint64_t seed) {
  const fs::path out = output_dir.empty() ? fs::path(cfg.output_dir)
                                          : fs::path(output_dir);
  fs::create_directories(out);
  try {
    if (command == "solve") return run_solve(cfg, out);
    if (command == "optimize") return run_optimize(cfg, out);
    if (command == "verify") return run_verify(cfg, out, seed);
    throw std::invalid_argument("unknown subcommand: " + command);
  } catch (const ConfigError& e) {
    ordered_json summary = base_summary(command, cfg);
    summary["status"] = "config-error";
    summary["error"] = e.what();
    write_json_file(out / "summary.json", summary);
    return kExitConfigError;
  } catch (const NonconvergenceError& e) {
    // Failures outside the per-command handlers (e.g. the forward solve that
    // manufactures optimization targets).
    ordered_json summary = base_summary(command, cfg);
    summary["status"] = "nonconvergence";
    summary["error"] = e.what();
    write_json_file(out / "summary.json", summary);
    return kExitNonconvergence;
  }
}

}  // namespace deadoil
