#include "riemflow/bench.hpp"

#include <array>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "riemflow/matfun.hpp"
#include "riemflow/rng.hpp"

namespace riemflow {

namespace fs = std::filesystem;

void InstanceSpec::validate() const {
  if (problem != "eigenvalue" && problem != "karcher" && problem != "flat")
    throw std::invalid_argument("instance spec: unknown problem " + problem);
  if (n < 1) throw std::invalid_argument("instance spec: n must be positive");
  if (problem != "flat" && m < 1) throw std::invalid_argument("instance spec: m must be positive");
  if (problem == "eigenvalue" && !(beta > 0.0))
    throw std::invalid_argument("instance spec: beta must be positive");
  if (problem == "karcher" && !(0.0 <= eig_lo && eig_lo < eig_hi))
    throw std::invalid_argument("instance spec: need 0 <= eig_lo < eig_hi");
  if (!(diameter_safety > 0.0))
    throw std::invalid_argument("instance spec: diameter safety factor must be positive");
}

namespace {

std::string instance_hash(const InstanceSpec& spec, const std::vector<Matrix>& mats,
                          const Point& x0) {
  std::uint64_t h = kFnvOffset;
  h = fnv1a(h, spec.problem.data(), spec.problem.size());
  h = fnv1a(h, &spec.seed, sizeof spec.seed);
  for (const Matrix& m : mats) h = hash_matrix(h, m);
  h = hash_matrix(h, x0.coords);
  return hash_hex(h);
}

double default_or(double maybe, double fallback) {
  return std::isnan(maybe) ? fallback : maybe;
}

}  // namespace

ProblemInstance gen_eigenvalue_instance(const InstanceSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  const Matrix g = rng.normal_matrix(spec.m, spec.n);
  const Matrix a = symmetrize(g.transpose() * g / spec.beta);

  // initial point uniform on the hemisphere about the pole e_1
  Eigen::VectorXd x0 = rng.normal_vector(spec.n);
  x0.normalize();
  if (x0[0] < 0.0) x0 = -x0;

  Eigen::SelfAdjointEigenSolver<Matrix> eig(a);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("eigenvalue oracle: eigendecomposition failed");
  // The argmin is the eigenvector pair {v, -v}; the representative is the
  // one in the basin of x0, so d(x0, zref) <= pi/2 and the working ball is
  // geodesically convex. The containment chart is poled at that
  // representative.
  Eigen::VectorXd top = eig.eigenvectors().col(spec.n - 1);
  if (x0.dot(top) < 0.0) top = -top;

  ProblemInstance inst;
  inst.problem = "eigenvalue";
  inst.objective = std::make_shared<RayleighObjective>(a, top);
  inst.x0 = Point{x0};
  inst.oracle = BenchmarkOracle{-0.5 * eig.eigenvalues()[spec.n - 1], Point{top},
                                "dense-eigensolver"};
  const double d0 = inst.manifold().distance(inst.x0, inst.oracle.zref);
  const double diam = default_or(spec.diameter, d0 * spec.diameter_safety);
  inst.profile = make_profile(default_or(spec.k_min, 1.0), 1.0, std::max(diam, 1e-6));
  inst.id = instance_hash(spec, {a}, inst.x0);
  return inst;
}

BenchmarkOracle karcher_oracle(const std::vector<Matrix>& mats, const Point& p0, double tol,
                               int max_iters) {
  KarcherObjective obj(mats);
  const Manifold& m = obj.manifold();
  const double inv_2m = 1.0 / (2.0 * static_cast<double>(mats.size()));
  Point p = p0;
  for (int it = 0; it <= max_iters; ++it) {
    Tangent grad{p, Matrix()};
    const double fval = obj.value_and_gradient(p, grad);
    if (m.norm(p, grad) <= tol)
      return BenchmarkOracle{fval, p, "karcher-fixed-point"};
    Tangent step{p, -inv_2m * grad.components};
    p = m.exp(p, step);
  }
  throw std::runtime_error("karcher oracle: fixed-point iteration did not reach tolerance");
}

Matrix geodesic_midpoint(const Matrix& a1, const Matrix& a2) {
  const Matrix r = sym_sqrt(a1);
  const Matrix ri = sym_inv_sqrt(a1);
  return symmetrize(r * sym_sqrt(symmetrize(ri * a2 * ri)) * r);
}

ProblemInstance gen_karcher_instance(const InstanceSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  std::vector<Matrix> mats;
  mats.reserve(static_cast<std::size_t>(spec.m));
  Matrix log_sum = Matrix::Zero(spec.n, spec.n);
  for (int j = 0; j < spec.m; ++j) {
    // A_j = U_j Q_j U_j^T with U_j orthonormal from a QR factorization and
    // Q_j diagonal with eigenvalues drawn from (eig_lo, eig_hi)
    const Matrix gj = rng.normal_matrix(spec.n, spec.n);
    Eigen::HouseholderQR<Matrix> qr(gj);
    Matrix u = qr.householderQ();
    Eigen::VectorXd q(spec.n);
    for (int i = 0; i < spec.n; ++i) q[i] = rng.uniform(spec.eig_lo, spec.eig_hi);
    const Matrix aj = symmetrize(u * q.asDiagonal() * u.transpose());
    log_sum += sym_logm(aj);
    mats.push_back(aj);
  }
  // explog-geometric mean as the initial point
  const Matrix p0 = sym_expm(log_sum / static_cast<double>(spec.m));

  auto objective = std::make_shared<KarcherObjective>(mats);
  ProblemInstance inst;
  inst.problem = "karcher";
  inst.objective = objective;
  inst.x0 = Point{p0};
  inst.oracle = karcher_oracle(mats, inst.x0, spec.karcher_oracle_tol);
  const double d0 = objective->manifold().distance(inst.x0, inst.oracle.zref);
  const double diam = default_or(spec.diameter, d0 * spec.diameter_safety);
  inst.profile = make_profile(default_or(spec.k_min, -0.1), 0.0, std::max(diam, 1e-6));
  inst.id = instance_hash(spec, mats, inst.x0);
  return inst;
}

ProblemInstance gen_flat_instance(const InstanceSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  auto objective = std::make_shared<FlatQuadratic>(Matrix::Identity(spec.n, spec.n));
  Eigen::VectorXd x0 = rng.normal_vector(spec.n);

  ProblemInstance inst;
  inst.problem = "flat";
  inst.objective = objective;
  inst.x0 = Point{x0};
  inst.oracle = BenchmarkOracle{0.0, Point{Eigen::VectorXd::Zero(spec.n)}, "closed-form"};
  const double d0 = x0.norm();
  const double diam = default_or(spec.diameter, d0 * spec.diameter_safety);
  inst.profile = make_profile(default_or(spec.k_min, 0.0), 0.0, std::max(diam, 1e-6));
  inst.id = instance_hash(spec, {}, inst.x0);
  return inst;
}

ProblemInstance gen_instance(const InstanceSpec& spec) {
  if (spec.problem == "eigenvalue") return gen_eigenvalue_instance(spec);
  if (spec.problem == "karcher") return gen_karcher_instance(spec);
  if (spec.problem == "flat") return gen_flat_instance(spec);
  throw std::invalid_argument("gen_instance: unknown problem " + spec.problem);
}

RunSummary summarize_run(const ProblemInstance& instance, const Trajectory& traj) {
  RunSummary s;
  s.alpha = traj.config.alpha;
  s.overshoot_warnings = traj.overshoot_warnings;
  s.completed = traj.completed;
  s.error = traj.error;
  if (traj.samples.empty()) return s;

  const auto trace = energy_trace(traj, instance.oracle.zref, instance.oracle.fstar);
  std::vector<double> energies;
  energies.reserve(trace.size());
  for (const auto& e : trace) energies.push_back(e.W);
  s.max_energy_increase = max_increase(energies);
  s.energy_slack = 1e-8 * (1.0 + trace.front().W);
  s.stagnation_t = stagnation_time(trace);
  s.final_gap = traj.samples.back().f_val - instance.oracle.fstar;
  const double dfinal =
      instance.manifold().distance(traj.samples.back().x, instance.oracle.zref);
  s.final_dist2 = dfinal * dfinal;
  for (const auto& sample : traj.samples) s.containment_ok &= sample.containment_ok;

  if (traj.config.alpha <= instance.profile.delta) {
    const auto sub = subcritical_energy(traj, instance.oracle.zref, instance.oracle.fstar,
                                        traj.config.alpha, instance.profile);
    std::vector<double> ws;
    ws.reserve(sub.size());
    for (const auto& e : sub) ws.push_back(e.W);
    s.max_subcritical_increase = max_increase(ws);
  }
  try {
    s.rate = fit_rate_last_decade(trace);
  } catch (const std::invalid_argument&) {
    s.rate.reset();  // too few usable samples; reported as absent
  }
  return s;
}

void write_trajectory_csv(const fs::path& path, const ProblemInstance& instance,
                          const Trajectory& traj) {
  const auto trace = energy_trace(traj, instance.oracle.zref, instance.oracle.fstar);
  const auto dists = distance_trace(traj, instance.oracle.zref);
  std::ostringstream out;
  out << "t,f_gap,t2_f_gap,grad_norm,speed,energy,dist_to_ref,containment\n";
  const Manifold& m = instance.manifold();
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    const TrajectorySample& smp = traj.samples[i];
    out << format_double(smp.t) << ',' << format_double(smp.f_val - instance.oracle.fstar)
        << ',' << format_double(trace[i].scaled_gap) << ',' << format_double(smp.grad_norm)
        << ',' << format_double(m.norm(smp.x, smp.v)) << ',' << format_double(trace[i].W)
        << ',' << format_double(dists[i].second) << ',' << (smp.containment_ok ? '1' : '0')
        << '\n';
  }
  write_text(path, out.str());
}

void write_diagnostics_csv(const fs::path& path, const ProblemInstance& instance,
                           const Trajectory& traj) {
  const auto trace = energy_trace(traj, instance.oracle.zref, instance.oracle.fstar);
  const bool subcritical = traj.config.alpha <= instance.profile.delta;
  std::vector<SubcriticalEnergy> sub;
  if (subcritical)
    sub = subcritical_energy(traj, instance.oracle.zref, instance.oracle.fstar,
                             traj.config.alpha, instance.profile);
  std::ostringstream out;
  out << "t,W,scaled_gap,h";
  if (subcritical) out << ",subcritical_W";
  out << '\n';
  for (std::size_t i = 0; i < trace.size(); ++i) {
    out << format_double(trace[i].t) << ',' << format_double(trace[i].W) << ','
        << format_double(trace[i].scaled_gap) << ',' << format_double(trace[i].h);
    if (subcritical) out << ',' << format_double(sub[i].W);
    out << '\n';
  }
  write_text(path, out.str());
}

json profile_to_json(const CurvatureProfile& p) {
  return json{{"k_min", p.k_min},
              {"k_max", p.k_max},
              {"diameter", p.diameter},
              {"zeta", p.zeta},
              {"delta", p.delta}};
}

CurvatureProfile profile_from_json(const json& j) {
  return make_profile(j.at("k_min").get<double>(), j.at("k_max").get<double>(),
                      j.at("diameter").get<double>());
}

json spec_to_json(const InstanceSpec& spec) {
  json j{{"problem", spec.problem}, {"m", spec.m},           {"n", spec.n},
         {"beta", spec.beta},       {"eig_lo", spec.eig_lo}, {"eig_hi", spec.eig_hi},
         {"seed", spec.seed},       {"diameter_safety", spec.diameter_safety}};
  if (!std::isnan(spec.k_min)) j["k_min"] = spec.k_min;
  if (!std::isnan(spec.diameter)) j["diameter"] = spec.diameter;
  return j;
}

InstanceSpec spec_from_json(const json& j) {
  InstanceSpec spec;
  spec.problem = j.at("problem").get<std::string>();
  spec.m = j.value("m", spec.m);
  spec.n = j.at("n").get<int>();
  spec.beta = j.value("beta", spec.beta);
  spec.eig_lo = j.value("eig_lo", spec.eig_lo);
  spec.eig_hi = j.value("eig_hi", spec.eig_hi);
  spec.seed = j.at("seed").get<std::uint64_t>();
  spec.diameter_safety = j.value("diameter_safety", spec.diameter_safety);
  if (j.contains("k_min")) spec.k_min = j.at("k_min").get<double>();
  if (j.contains("diameter")) spec.diameter = j.at("diameter").get<double>();
  return spec;
}

json summary_to_json(const RunSummary& s) {
  json j;
  j["alpha"] = s.alpha;
  if (s.rate) {
    j["fitted_exponent"] = s.rate->fitted_exponent;
    j["rate_window"] = {s.rate->t_lo, s.rate->t_hi};
    j["r_squared"] = s.rate->r_squared;
    j["rate_samples"] = s.rate->n_samples;
  } else {
    j["fitted_exponent"] = nullptr;
  }
  j["max_energy_increase"] = s.max_energy_increase;
  j["energy_slack"] = s.energy_slack;
  if (!std::isnan(s.max_subcritical_increase))
    j["max_subcritical_increase"] = s.max_subcritical_increase;
  j["stagnation_time"] = std::isnan(s.stagnation_t) ? json(nullptr) : json(s.stagnation_t);
  j["final_gap"] = s.final_gap;
  j["final_dist2"] = s.final_dist2;
  j["overshoot_warnings"] = s.overshoot_warnings;
  j["containment_ok"] = s.containment_ok;
  j["completed"] = s.completed;
  if (!s.error.empty()) j["error"] = s.error;
  return j;
}

namespace {

std::string alpha_tag(double alpha) {
  std::string tag = format_double(alpha);
  for (char& c : tag)
    if (c == '.') c = 'p';
  return tag;
}

unsigned sweep_threads(std::size_t runs) {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("RIEMFLOW_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap > 0 && static_cast<unsigned>(cap) < hw) hw = static_cast<unsigned>(cap);
  }
  return static_cast<unsigned>(std::min<std::size_t>(hw, std::max<std::size_t>(runs, 1)));
}

}  // namespace

SweepResult sweep(const ProblemInstance& instance, const InstanceSpec& spec,
                  const std::vector<double>& alphas, const SolverConfig& base,
                  const fs::path& outdir) {
  fs::create_directories(outdir);
  SweepResult result;
  result.runs.resize(alphas.size());

  auto run_one = [&](std::size_t i) {
    SweepRunRecord& rec = result.runs[i];
    rec.alpha = alphas[i];
    const std::string tag = alpha_tag(alphas[i]);
    rec.trajectory_file = "traj_alpha_" + tag + ".csv";
    rec.diagnostics_file = "diag_alpha_" + tag + ".csv";
    rec.summary_file = "summary_alpha_" + tag + ".json";
    try {
      SolverConfig cfg = base;
      cfg.alpha = alphas[i];
      const Trajectory traj = solve(instance, cfg);
      if (!traj.completed) {
        rec.status = "error: " + traj.error;
      }
      write_trajectory_csv(outdir / rec.trajectory_file, instance, traj);
      write_diagnostics_csv(outdir / rec.diagnostics_file, instance, traj);
      rec.summary = summarize_run(instance, traj);
      write_text(outdir / rec.summary_file, summary_to_json(rec.summary).dump(2) + "\n");
    } catch (const std::exception& e) {
      rec.status = std::string("error: ") + e.what();
    }
  };

  const unsigned nthreads = sweep_threads(alphas.size());
  if (nthreads <= 1 || alphas.size() <= 1) {
    for (std::size_t i = 0; i < alphas.size(); ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    workers.reserve(nthreads);
    for (unsigned w = 0; w < nthreads; ++w)
      workers.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < alphas.size(); i = next.fetch_add(1))
          run_one(i);
      });
    for (std::thread& t : workers) t.join();
  }

  json manifest;
  manifest["spec"] = spec_to_json(spec);
  manifest["seed"] = spec.seed;
  manifest["instance_hash"] = instance.id;
  manifest["curvature_profile"] = profile_to_json(instance.profile);
  manifest["oracle"] = {{"fstar", instance.oracle.fstar}, {"method", instance.oracle.method}};
  manifest["solver"] = {{"dt", base.dt},
                        {"horizon", base.horizon},
                        {"time_origin", base.origin()},
                        {"record_every", base.record_every}};
  // Thm 5.3 exponent: the min form resolves to alpha/delta for alpha <= delta
  manifest["subcritical_p"] = "alpha/delta";
  manifest["subcritical_p_min_form"] = "min(1, alpha/delta, (alpha+1)/4)";
  json runs = json::array();
  for (const SweepRunRecord& rec : result.runs) {
    json r;
    r["alpha"] = rec.alpha;
    r["status"] = rec.status;
    r["files"] = {{"trajectory", rec.trajectory_file},
                  {"diagnostics", rec.diagnostics_file},
                  {"summary", rec.summary_file}};
    if (rec.status == "ok") {
      r["fitted_exponent"] =
          rec.summary.rate ? json(rec.summary.rate->fitted_exponent) : json(nullptr);
      r["stagnation_time"] = std::isnan(rec.summary.stagnation_t)
                                 ? json(nullptr)
                                 : json(rec.summary.stagnation_t);
    }
    runs.push_back(r);
  }
  manifest["runs"] = runs;
  result.manifest_path = outdir / "manifest.json";
  write_text(result.manifest_path, manifest.dump(2) + "\n");
  return result;
}

void write_report(const fs::path& manifest_path, const fs::path& outdir) {
  const json manifest = json::parse(read_text(manifest_path));
  const fs::path rundir = manifest_path.parent_path();
  fs::create_directories(outdir);

  std::vector<double> alphas;
  std::vector<Matrix> tables;  // per run: (t, f_gap, t2_f_gap)
  for (const json& r : manifest.at("runs")) {
    if (r.at("status").get<std::string>() != "ok") continue;
    const fs::path traj = rundir / r.at("files").at("trajectory").get<std::string>();
    std::ifstream in(traj);
    if (!in) throw std::runtime_error("report: missing trajectory file " + traj.string());
    std::string line;
    std::getline(in, line);  // header
    std::vector<std::array<double, 3>> rows;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::array<double, 3> row{};
      std::stringstream ss(line);
      std::string cell;
      for (int c = 0; std::getline(ss, cell, ','); ++c) {
        if (c < 3) row[static_cast<std::size_t>(c)] = std::strtod(cell.c_str(), nullptr);
      }
      rows.push_back(row);
    }
    Matrix t(static_cast<Eigen::Index>(rows.size()), 3);
    for (Eigen::Index i = 0; i < t.rows(); ++i)
      for (Eigen::Index j = 0; j < 3; ++j)
        t(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    tables.push_back(std::move(t));
    alphas.push_back(r.at("alpha").get<double>());
  }
  if (tables.empty()) {
    write_text(outdir / "fgap_vs_t.csv", "t\n");
    write_text(outdir / "t2fgap_vs_t.csv", "t\n");
    return;
  }

  auto write_table = [&](const fs::path& path, int col) {
    std::ostringstream out;
    out << "t";
    for (double a : alphas) out << ",alpha_" << format_double(a);
    out << '\n';
    const Eigen::Index nrows = tables.front().rows();
    for (Eigen::Index i = 0; i < nrows; ++i) {
      out << format_double(tables.front()(i, 0));
      for (const Matrix& t : tables)
        out << ',' << format_double(i < t.rows() ? t(i, col) : std::nan(""));
      out << '\n';
    }
    write_text(path, out.str());
  };
  write_table(outdir / "fgap_vs_t.csv", 1);
  write_table(outdir / "t2fgap_vs_t.csv", 2);
}

}  // namespace riemflow
