// riemflow: benchmark CLI for the damped second-order Riemannian gradient
// flow. Subcommands: gen | run | sweep | diagnose | report.

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "riemflow/bench.hpp"

namespace fs = std::filesystem;
using namespace riemflow;

namespace {

struct SpecFlags {
  InstanceSpec spec;
  std::string instance_dir;

  void attach(CLI::App* cmd, bool with_instance) {
    cmd->add_option("--problem", spec.problem, "eigenvalue | karcher | flat");
    cmd->add_option("--m", spec.m, "rows of G (eigenvalue) / matrix count (karcher)");
    cmd->add_option("--n", spec.n, "ambient dimension / matrix size");
    cmd->add_option("--beta", spec.beta, "eigenvalue scaling A = G^T G / beta");
    cmd->add_option("--eig-lo", spec.eig_lo, "karcher eigenvalue range, lower end");
    cmd->add_option("--eig-hi", spec.eig_hi, "karcher eigenvalue range, upper end");
    cmd->add_option("--seed", spec.seed, "instance seed");
    cmd->add_option("--kmin", spec.k_min, "lower sectional curvature bound override");
    cmd->add_option("--diameter", spec.diameter, "diameter bound override");
    cmd->add_option("--safety", spec.diameter_safety,
                    "safety factor on the estimated diameter");
    if (with_instance)
      cmd->add_option("--instance", instance_dir, "load a generated instance directory");
  }
};

void write_instance_dir(const ProblemInstance& inst, const InstanceSpec& spec,
                        const fs::path& dir) {
  fs::create_directories(dir);
  json meta;
  meta["problem"] = inst.problem;
  meta["spec"] = spec_to_json(spec);
  meta["instance_hash"] = inst.id;
  meta["curvature_profile"] = profile_to_json(inst.profile);
  meta["oracle"] = {{"fstar", inst.oracle.fstar}, {"method", inst.oracle.method}};
  meta["x0"] = point_to_json(inst.manifold(), inst.x0);
  meta["zref"] = point_to_json(inst.manifold(), inst.oracle.zref);

  if (inst.problem == "eigenvalue") {
    const auto& obj = dynamic_cast<const RayleighObjective&>(*inst.objective);
    write_matrix_bin(dir / "A.bin", obj.matrix());
    meta["files"] = {{"A", "A.bin"}};
  } else if (inst.problem == "karcher") {
    const auto& obj = dynamic_cast<const KarcherObjective&>(*inst.objective);
    json files = json::array();
    for (std::size_t j = 0; j < obj.matrices().size(); ++j) {
      char name[32];
      std::snprintf(name, sizeof name, "A_%03zu.bin", j);
      write_matrix_bin(dir / name, obj.matrices()[j]);
      files.push_back(name);
    }
    meta["files"] = {{"A", files}};
  }
  write_text(dir / "instance.json", meta.dump(2) + "\n");
}

ProblemInstance load_instance_dir(const fs::path& dir, InstanceSpec& spec_out) {
  const json meta = json::parse(read_text(dir / "instance.json"));
  spec_out = spec_from_json(meta.at("spec"));

  ProblemInstance inst;
  inst.problem = meta.at("problem").get<std::string>();
  inst.id = meta.at("instance_hash").get<std::string>();
  inst.profile = profile_from_json(meta.at("curvature_profile"));

  if (inst.problem == "eigenvalue") {
    const Matrix a = read_matrix(dir / meta.at("files").at("A").get<std::string>());
    // chart pole is the stored argmin representative
    const Point zref = point_from_json(Hemisphere(a.rows()), meta.at("zref"));
    inst.objective = std::make_shared<RayleighObjective>(a, zref.coords.col(0));
  } else if (inst.problem == "karcher") {
    std::vector<Matrix> mats;
    for (const json& f : meta.at("files").at("A"))
      mats.push_back(read_matrix(dir / f.get<std::string>()));
    inst.objective = std::make_shared<KarcherObjective>(std::move(mats));
  } else if (inst.problem == "flat") {
    inst.objective = std::make_shared<FlatQuadratic>(
        Matrix(Matrix::Identity(spec_out.n, spec_out.n)));
  } else {
    throw std::runtime_error("unknown problem in instance: " + inst.problem);
  }
  inst.x0 = point_from_json(inst.manifold(), meta.at("x0"));
  inst.oracle.fstar = meta.at("oracle").at("fstar").get<double>();
  inst.oracle.method = meta.at("oracle").at("method").get<std::string>();
  inst.oracle.zref = point_from_json(inst.manifold(), meta.at("zref"));
  return inst;
}

ProblemInstance obtain_instance(SpecFlags& flags) {
  if (!flags.instance_dir.empty()) return load_instance_dir(flags.instance_dir, flags.spec);
  return gen_instance(flags.spec);
}

std::vector<double> parse_alphas(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string cell;
  while (std::getline(ss, cell, ','))
    if (!cell.empty()) out.push_back(std::strtod(cell.c_str(), nullptr));
  return out;
}

// Summary recomputed from a trajectory dump alone (no manifold needed):
// rate fit over the last non-stagnated decade, energy monotonicity margin,
// stagnation time and endpoint values.
json diagnose_csv(const fs::path& traj_csv) {
  std::ifstream in(traj_csv);
  if (!in) throw std::runtime_error("cannot open: " + traj_csv.string());
  std::string line;
  std::getline(in, line);
  std::vector<double> t, fgap, energy, dist2;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
    if (row.size() < 8) throw std::runtime_error("bad trajectory row in " + traj_csv.string());
    t.push_back(row[0]);
    fgap.push_back(row[1]);
    energy.push_back(row[5]);
    dist2.push_back(row[6]);
  }
  if (t.empty()) throw std::runtime_error("empty trajectory: " + traj_csv.string());

  json j;
  double stag = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::pair<double, double>> series;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (fgap[i] < kStagnationTol) {
      stag = t[i];
      break;
    }
    series.emplace_back(t[i], fgap[i]);
  }
  j["stagnation_time"] = std::isnan(stag) ? json(nullptr) : json(stag);
  if (!series.empty()) {
    const double t_hi = series.back().first;
    try {
      const RateFit fit = fit_power_law(series, t_hi / 10.0, t_hi);
      j["fitted_exponent"] = fit.fitted_exponent;
      j["rate_window"] = {fit.t_lo, fit.t_hi};
      j["r_squared"] = fit.r_squared;
    } catch (const std::invalid_argument&) {
      j["fitted_exponent"] = nullptr;
    }
  }
  j["max_energy_increase"] = max_increase(energy);
  j["energy_slack"] = 1e-8 * (1.0 + energy.front());
  j["final_gap"] = fgap.back();
  j["final_dist2"] = dist2.back();
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Second-order Riemannian gradient flow benchmark"};
  app.require_subcommand(1);

  SpecFlags gen_flags, run_flags, sweep_flags;
  std::string out_dir = "out";
  double alpha = 3.0;
  std::string alphas_csv;
  SolverConfig base;
  base.horizon = 200.0;
  std::string traj_csv, manifest_file, diag_out;

  CLI::App* gen = app.add_subcommand("gen", "generate a problem instance into a directory");
  gen_flags.attach(gen, false);
  gen->add_option("--out", out_dir, "output directory")->required();

  CLI::App* run = app.add_subcommand("run", "solve one (instance, alpha) pair");
  run_flags.attach(run, true);
  run->add_option("--alpha", alpha, "damping coefficient");
  run->add_option("--dt", base.dt, "step size");
  run->add_option("--T", base.horizon, "time horizon");
  run->add_option("--time-origin", base.time_origin, "time assigned to the first step");
  run->add_option("--record-every", base.record_every, "record every k-th step");
  run->add_option("--out", out_dir, "output directory");

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "solve one instance over a list of alphas");
  sweep_flags.attach(sweep_cmd, true);
  sweep_cmd->add_option("--alphas", alphas_csv, "comma-separated alpha list")->required();
  sweep_cmd->add_option("--dt", base.dt, "step size");
  sweep_cmd->add_option("--T", base.horizon, "time horizon");
  sweep_cmd->add_option("--time-origin", base.time_origin, "time assigned to the first step");
  sweep_cmd->add_option("--record-every", base.record_every, "record every k-th step");
  sweep_cmd->add_option("--out", out_dir, "output directory");

  CLI::App* diagnose = app.add_subcommand("diagnose", "recompute a summary from a trajectory CSV");
  diagnose->add_option("--traj", traj_csv, "trajectory CSV file")->required();
  diagnose->add_option("--out", diag_out, "summary JSON output (default: stdout)");

  CLI::App* report = app.add_subcommand("report", "emit plot-data tables for a sweep manifest");
  report->add_option("--manifest", manifest_file, "sweep manifest JSON")->required();
  report->add_option("--out", out_dir, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      const ProblemInstance inst = gen_instance(gen_flags.spec);
      write_instance_dir(inst, gen_flags.spec, out_dir);
      std::cout << "instance " << inst.id << " written to " << out_dir << "\n";
    } else if (run->parsed()) {
      const ProblemInstance inst = obtain_instance(run_flags);
      const SweepResult res = sweep(inst, run_flags.spec, {alpha}, base, out_dir);
      std::cout << "run " << res.runs.front().status << "; manifest: "
                << res.manifest_path.string() << "\n";
      if (res.runs.front().status != "ok") return 1;
    } else if (sweep_cmd->parsed()) {
      const ProblemInstance inst = obtain_instance(sweep_flags);
      const std::vector<double> alphas = parse_alphas(alphas_csv);
      const SweepResult res = sweep(inst, sweep_flags.spec, alphas, base, out_dir);
      int failures = 0;
      for (const auto& r : res.runs) {
        std::cout << "alpha " << r.alpha << ": " << r.status << "\n";
        if (r.status != "ok") ++failures;
      }
      std::cout << "manifest: " << res.manifest_path.string() << "\n";
      if (failures) std::cerr << failures << " run(s) failed; see manifest\n";
    } else if (diagnose->parsed()) {
      const json j = diagnose_csv(traj_csv);
      if (diag_out.empty())
        std::cout << j.dump(2) << "\n";
      else
        write_text(diag_out, j.dump(2) + "\n");
    } else if (report->parsed()) {
      write_report(manifest_file, out_dir);
      std::cout << "plot data written to " << out_dir << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
