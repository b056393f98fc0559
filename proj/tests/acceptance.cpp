// Acceptance suite: runs every benchmark-level criterion at its stated
// tolerance and prints one pass/fail line per criterion. Returns the number
// of failing criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "riemflow/bench.hpp"
#include "riemflow/matfun.hpp"

#include "oracles.hpp"

using namespace riemflow;
namespace fs = std::filesystem;

namespace {

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;
  std::function<bool(std::ostringstream&)> body;
};

// ---------------------------------------------------------------------------
// shared desk-scale sweeps (criteria 4, 6, 7, 8, 9 reuse these)
// ---------------------------------------------------------------------------

struct DeskRuns {
  ProblemInstance instance;
  std::map<double, Trajectory> runs;
  std::map<double, std::vector<EnergyTrace>> traces;

  const Trajectory& at(double alpha) const { return runs.at(alpha); }
  const std::vector<EnergyTrace>& trace(double alpha) const { return traces.at(alpha); }
};

DeskRuns desk_sweep(const ProblemInstance& inst, const std::vector<double>& alphas,
                    double horizon, double dt) {
  DeskRuns out{inst, {}, {}};
  for (double a : alphas) {
    SolverConfig cfg;
    cfg.alpha = a;
    cfg.dt = dt;
    cfg.horizon = horizon;
    Trajectory traj = solve(inst, cfg);
    out.traces[a] = energy_trace(traj, inst.oracle.zref, inst.oracle.fstar);
    out.runs[a] = std::move(traj);
  }
  return out;
}

std::optional<DeskRuns> g_hemi;
std::optional<DeskRuns> g_karcher;

const std::vector<double> kHemiAlphas{1.5, 2.5, 3.0, 4.0, 8.0, 6.0};  // 6.0 = 2 delta
const double kKarcherDiameter = 4.46;                                 // benchmark heuristic
std::vector<double> karcher_alphas(double delta) {
  return {2.0, 3.0, 4.1, 5.0, 7.0, 2.0 * delta};
}

const DeskRuns& hemi_runs() {
  if (!g_hemi) {
    InstanceSpec spec;
    spec.problem = "eigenvalue";
    spec.m = 200;
    spec.n = 50;
    spec.beta = 100.0;
    spec.seed = 1;
    g_hemi = desk_sweep(gen_eigenvalue_instance(spec), kHemiAlphas, 200.0, 0.1);
  }
  return *g_hemi;
}

const DeskRuns& karcher_runs() {
  if (!g_karcher) {
    InstanceSpec spec;
    spec.problem = "karcher";
    spec.m = 5;
    spec.n = 10;
    spec.seed = 1;
    spec.diameter = kKarcherDiameter;  // paper-scale delta ~ 4.18 (see README)
    ProblemInstance inst = gen_karcher_instance(spec);
    g_karcher = desk_sweep(inst, karcher_alphas(inst.profile.delta), 200.0, 0.1);
  }
  return *g_karcher;
}

std::string fmt(double v) { return format_double(v); }

// ---------------------------------------------------------------------------
// criteria
// ---------------------------------------------------------------------------

bool criterion_flat_oracle(std::ostringstream& out) {
  InstanceSpec spec;
  spec.problem = "flat";
  spec.n = 4;
  spec.seed = 42;
  const ProblemInstance inst = gen_flat_instance(spec);
  SolverConfig cfg;
  cfg.alpha = 3.0;
  cfg.dt = 1e-3;
  cfg.horizon = 50.0;
  const Trajectory traj = solve(inst, cfg);
  auto grad = [](const Eigen::VectorXd& x) { return x; };
  const auto ref = oracles::rk4_reference(inst.x0.coords.col(0), grad, cfg.alpha, cfg.dt,
                                          cfg.horizon, cfg.dt, 4);
  if (traj.samples.size() != ref.size()) {
    out << "sample count mismatch";
    return false;
  }
  double sup = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    if (traj.samples[i].t < 1.0) continue;
    sup = std::max(sup, (traj.samples[i].x.coords.col(0) - ref[i]).cwiseAbs().maxCoeff());
  }
  out << "sup-norm vs reference over [1,50]: " << fmt(sup) << " (tol 1e-3)";
  return sup < 1e-3;
}

Point random_point_on(const Manifold& m, Rng& rng) {
  if (m.name() == "hemisphere") {
    Eigen::VectorXd x = rng.normal_vector(m.rows());
    x.normalize();
    if (x[0] < 0.0) x = -x;
    return Point{x};
  }
  if (m.name() == "spd")
    return Point{sym_expm(0.4 * symmetrize(rng.normal_matrix(m.rows(), m.rows())))};
  return Point{rng.normal_vector(m.rows())};
}

bool criterion_geometry(std::ostringstream& out) {
  const int cases = 100;
  double worst_round = 0.0, worst_iso = 0.0, worst_fd = 0.0;

  auto geometry = [&](const Manifold& m, double max_norm, std::uint64_t seed) {
    Rng rng(seed);
    for (int i = 0; i < cases; ++i) {
      const Point x = random_point_on(m, rng);
      Tangent v = m.random_tangent(x, rng);
      const double nv0 = m.norm(x, v);
      if (nv0 == 0.0) { --i; continue; }
      v.components *= rng.uniform(1e-3, max_norm) / nv0;
      const double nv = m.norm(x, v);
      const Point y = m.exp(x, v);
      const Tangent back = m.log(x, y);
      worst_round = std::max(
          worst_round, (back.components - v.components).norm() / (1.0 + nv));
      const Tangent u = m.random_tangent(x, rng);
      const Tangent w = m.random_tangent(x, rng);
      const double before = m.inner(x, u, w);
      const double after = m.inner(y, m.transport(x, y, u), m.transport(x, y, w));
      worst_iso = std::max(worst_iso, std::abs(after - before) / (1.0 + std::abs(before)));
    }
  };
  Hemisphere sphere(12);
  SpdManifold spd(6);
  FlatSpace flat(9);
  geometry(sphere, 1.4, 201);
  geometry(spd, 2.0, 202);
  geometry(flat, 3.0, 203);

  auto fd_check = [&](const Objective& obj, std::uint64_t seed) {
    Rng rng(seed);
    const Manifold& m = obj.manifold();
    const double h = 1e-5;
    for (int i = 0; i < cases; ++i) {
      const Point x = random_point_on(m, rng);
      Tangent v = m.random_tangent(x, rng);
      const double nv = m.norm(x, v);
      if (nv == 0.0) { --i; continue; }
      v.components /= nv;
      const Tangent grad = obj.gradient(x);
      const double dd = m.inner(x, grad, v);
      Tangent step = v;
      step.components *= h;
      const double fp = obj.value(m.exp(x, step));
      step.components = -step.components;
      const double fm = obj.value(m.exp(x, step));
      const double fd = (fp - fm) / (2.0 * h);
      // error against the natural scale |grad| |v| (unit v here)
      const double denom = std::max({std::abs(dd), std::abs(fd), m.norm(x, grad), 1e-12});
      worst_fd = std::max(worst_fd, std::abs(dd - fd) / denom);
    }
  };
  Rng mats(204);
  const Matrix g = mats.normal_matrix(48, 12);
  fd_check(RayleighObjective(symmetrize(g.transpose() * g / 24.0)), 205);
  std::vector<Matrix> as;
  for (int j = 0; j < 4; ++j)
    as.push_back(sym_expm(0.5 * symmetrize(mats.normal_matrix(6, 6))));
  fd_check(KarcherObjective(as), 206);
  fd_check(FlatQuadratic::identity(9), 207);

  out << "worst roundtrip " << fmt(worst_round) << " (tol 1e-8), worst isometry drift "
      << fmt(worst_iso) << " (tol 1e-10), worst gradient-FD " << fmt(worst_fd)
      << " (tol 1e-6)";
  return worst_round <= 1e-8 && worst_iso <= 1e-10 && worst_fd <= 1e-6;
}

bool criterion_hessian_sandwich(std::ostringstream& out) {
  bool ok = true;
  Rng rng(301);

  FlatSpace flat(7);
  const auto flat_report = hessian_bound_check(
      flat, Point{rng.normal_vector(7)}, 50, make_profile(0.0, 0.0, 3.0), 3.0, rng);
  ok &= flat_report.lower_violations == 0 && flat_report.upper_violations == 0;

  Hemisphere sphere(10);
  const auto hemi_report =
      hessian_bound_check(sphere, random_point_on(sphere, rng), 50,
                          make_profile(1.0, 1.0, 1.4), 1.3, rng);
  ok &= hemi_report.lower_violations == 0 && hemi_report.upper_violations == 0;

  // SPD checked against the manifold's true curvature range [-1/2, 0);
  // the benchmark's heuristic K_min = -0.1 is not a curvature bound.
  SpdManifold spd(6);
  const auto spd_report = hessian_bound_check(spd, random_point_on(spd, rng), 50,
                                              make_profile(-0.5, 0.0, 3.0), 2.5, rng);
  ok &= spd_report.lower_violations == 0 && spd_report.upper_violations == 0;

  out << "violations (lower/upper): flat " << flat_report.lower_violations << "/"
      << flat_report.upper_violations << ", hemisphere " << hemi_report.lower_violations
      << "/" << hemi_report.upper_violations << ", spd " << spd_report.lower_violations
      << "/" << spd_report.upper_violations << "; worst margins " << fmt(flat_report.worst_upper_margin)
      << ", " << fmt(hemi_report.worst_upper_margin) << ", " << fmt(spd_report.worst_upper_margin);
  return ok;
}

bool energy_monotone(const std::vector<EnergyTrace>& trace, double& max_inc, double& slack) {
  std::vector<double> w;
  w.reserve(trace.size());
  for (const auto& e : trace) w.push_back(e.W);
  max_inc = max_increase(w);
  slack = 1e-8 * (1.0 + w.front());
  return max_inc <= slack;
}

bool criterion_energy_monotonicity(std::ostringstream& out) {
  bool ok = true;
  out << "per-run max W increase vs slack:";
  for (const auto& [label, runs, alphas] :
       {std::tuple<const char*, const DeskRuns*, std::vector<double>>{
            "hemisphere", &hemi_runs(), {1.5, 2.5, 3.0, 4.0, 8.0}},
        {"karcher", &karcher_runs(), {2.0, 3.0, 4.1, 5.0, 7.0}}}) {
    for (double a : alphas) {
      double inc = 0.0, slack = 0.0;
      const bool mono = energy_monotone(runs->trace(a), inc, slack);
      ok &= mono;
      out << "\n    " << label << " alpha=" << fmt(a) << ": max increase " << fmt(inc)
          << (mono ? " <= " : " > ") << fmt(slack);
    }
  }
  return ok;
}

bool criterion_subcritical_energy(std::ostringstream& out) {
  bool ok = true;
  out << "sub-critical A+B+C max increase vs slack:";

  auto check = [&](const char* label, const ProblemInstance& inst, double alpha) {
    SolverConfig cfg;
    cfg.alpha = alpha;
    cfg.dt = 0.1;
    cfg.horizon = 200.0;
    const Trajectory traj = solve(inst, cfg);
    const auto sub =
        subcritical_energy(traj, inst.oracle.zref, inst.oracle.fstar, alpha, inst.profile);
    std::vector<double> w;
    for (const auto& e : sub) w.push_back(e.W);
    const double inc = max_increase(w);
    const double slack = 1e-8 * (1.0 + w.front());
    const bool mono = inc <= slack;
    ok &= mono;
    out << "\n    " << label << " alpha=" << fmt(alpha) << ": max increase " << fmt(inc)
        << (mono ? " <= " : " > ") << fmt(slack);
  };

  const ProblemInstance& hemi = hemi_runs().instance;  // delta = 3
  InstanceSpec flat_spec;
  flat_spec.problem = "flat";
  flat_spec.n = 50;
  flat_spec.seed = 1;
  const ProblemInstance flat = gen_flat_instance(flat_spec);  // delta = 3
  for (double frac : {0.5, 0.9}) {
    check("hemisphere", hemi, frac * hemi.profile.delta);
    check("flat", flat, frac * flat.profile.delta);
  }
  return ok;
}

bool criterion_phase_transition(std::ostringstream& out) {
  const DeskRuns& runs = hemi_runs();
  const double delta = runs.instance.profile.delta;  // 3
  bool ok = true;
  double prev = -1e9;
  bool chain = true;
  out << "hemisphere fitted exponents:";
  for (double a : {1.5, 2.5, 3.0, 4.0, 8.0}) {
    const RateFit fit = fit_rate_last_decade(runs.trace(a));
    const double threshold = a < delta ? 2.0 * a / delta - 0.3 : 1.7;
    const bool meets = fit.fitted_exponent >= threshold;
    chain &= fit.fitted_exponent >= prev - 0.2;
    prev = fit.fitted_exponent;
    ok &= meets;
    out << "\n    alpha=" << fmt(a) << ": " << fmt(fit.fitted_exponent) << " (>= "
        << fmt(threshold) << (meets ? " ok" : " VIOLATED") << ", r2=" << fmt(fit.r_squared)
        << ")";
  }
  out << "\n    non-decreasing within 0.2: " << (chain ? "yes" : "NO");
  return ok && chain;
}

// scaled gap over the last pre-stagnation decade must fall to below half
// of its maximum there
bool little_o_signature(const std::vector<EnergyTrace>& trace, std::ostringstream& out,
                        const char* label) {
  double t_hi = 0.0;
  for (const auto& e : trace)
    if (!std::isnan(e.scaled_gap)) t_hi = e.t;
  const double t_lo = t_hi / 10.0;
  double maxval = 0.0, final_val = 0.0;
  for (const auto& e : trace) {
    if (std::isnan(e.scaled_gap) || e.t < t_lo || e.t > t_hi) continue;
    maxval = std::max(maxval, e.scaled_gap);
    final_val = e.scaled_gap;
  }
  const bool ok = maxval > 0.0 && final_val < 0.5 * maxval;
  out << "\n    " << label << ": final t^2 gap " << fmt(final_val) << " vs decade max "
      << fmt(maxval) << (ok ? " (decreasing)" : " (NOT decreasing)");
  return ok;
}

bool criterion_little_o(std::ostringstream& out) {
  out << "alpha = 2 delta runs:";
  bool ok = little_o_signature(hemi_runs().trace(6.0), out, "hemisphere alpha=6");
  const double twod = 2.0 * karcher_runs().instance.profile.delta;
  ok &= little_o_signature(karcher_runs().trace(twod), out,
                           ("karcher alpha=" + fmt(twod)).c_str());
  return ok;
}

bool criterion_stagnation_protocol(std::ostringstream& out) {
  int stagnating = 0;
  bool ok = true;
  auto inspect = [&](const char* label, const DeskRuns& runs) {
    for (const auto& [alpha, trace] : runs.traces) {
      const double t_stag = stagnation_time(trace);
      bool seen_cutoff = false;
      for (const auto& e : trace) {
        if (std::isnan(e.scaled_gap)) {
          seen_cutoff = true;
          continue;
        }
        // nothing stored at or past the cutoff, and no stored sample below
        // the stagnation tolerance
        if (seen_cutoff || (!std::isnan(t_stag) && e.t >= t_stag) ||
            e.scaled_gap / (e.t * e.t) < kStagnationTol) {
          ok = false;
          out << "\n    " << label << " alpha=" << fmt(alpha)
              << ": artifact at t=" << fmt(e.t);
          return;
        }
      }
      if (!std::isnan(t_stag)) ++stagnating;
    }
  };
  inspect("hemisphere", hemi_runs());
  inspect("karcher", karcher_runs());
  out << "stagnating runs observed: " << stagnating
      << "; stored series all stop at the 1e-12 cutoff: " << (ok ? "yes" : "NO");
  return ok && stagnating > 0;
}

bool criterion_trajectory_convergence(std::ostringstream& out) {
  const DeskRuns& runs = karcher_runs();
  const double delta = runs.instance.profile.delta;

  const auto d5 = distance_trace(runs.at(5.0), runs.instance.oracle.zref);
  const double final_d2 = d5.back().second;
  const bool super_ok = final_d2 < 1e-8;
  out << "alpha=5 final d^2 = " << fmt(final_d2) << " (tol 1e-8)";

  // alpha = 3 <= delta: fitted decay exponent of d^2 over the last
  // non-stagnated decade
  const auto& trace3 = runs.trace(3.0);
  double t_hi = 0.0;
  for (const auto& e : trace3)
    if (!std::isnan(e.scaled_gap)) t_hi = e.t;
  const auto d3 = distance_trace(runs.at(3.0), runs.instance.oracle.zref);
  const RateFit fit = fit_power_law(d3, t_hi / 10.0, t_hi);
  const double threshold = 2.0 * 3.0 / delta - 0.3;
  const bool sub_ok = fit.fitted_exponent >= threshold;
  out << "; alpha=3 d^2 decay exponent " << fmt(fit.fitted_exponent) << " (>= "
      << fmt(threshold) << ")";
  return super_ok && sub_ok;
}

bool criterion_karcher_oracle(std::ostringstream& out) {
  InstanceSpec spec;
  spec.problem = "karcher";
  spec.m = 2;
  spec.n = 8;
  spec.seed = 21;
  const ProblemInstance two = gen_karcher_instance(spec);
  const auto& obj = dynamic_cast<const KarcherObjective&>(*two.objective);
  const Matrix mid = geodesic_midpoint(obj.matrices()[0], obj.matrices()[1]);
  const double mid_err = (two.oracle.zref.coords - mid).norm() / (1.0 + mid.norm());

  const double g2 =
      two.manifold().norm(two.oracle.zref, two.objective->gradient(two.oracle.zref));
  const ProblemInstance& desk = karcher_runs().instance;
  const double g5 =
      desk.manifold().norm(desk.oracle.zref, desk.objective->gradient(desk.oracle.zref));

  out << "m=2 midpoint error " << fmt(mid_err) << " (tol 1e-8); oracle gradient norms "
      << fmt(g2) << ", " << fmt(g5) << " (tol 1e-10)";
  return mid_err <= 1e-8 && g2 <= 1e-10 && g5 <= 1e-10;
}

bool criterion_determinism(std::ostringstream& out) {
  InstanceSpec spec;
  spec.problem = "karcher";
  spec.m = 4;
  spec.n = 8;
  spec.seed = 31;
  SolverConfig base;
  base.dt = 0.1;
  base.horizon = 50.0;
  const std::vector<double> alphas{3.0, 5.0};

  const fs::path root = fs::temp_directory_path() / "riemflow_acceptance_det";
  fs::remove_all(root);
  const ProblemInstance inst1 = gen_karcher_instance(spec);
  const SweepResult res1 = sweep(inst1, spec, alphas, base, root / "a");
  const ProblemInstance inst2 = gen_karcher_instance(spec);
  const SweepResult res2 = sweep(inst2, spec, alphas, base, root / "b");

  bool ok = inst1.id == inst2.id;
  int files = 0;
  for (std::size_t i = 0; i < res1.runs.size(); ++i) {
    for (const std::string& f :
         {res1.runs[i].trajectory_file, res1.runs[i].diagnostics_file}) {
      ++files;
      ok &= read_text(root / "a" / f) == read_text(root / "b" / f);
    }
  }
  ok &= read_text(res1.manifest_path) == read_text(res2.manifest_path);
  out << "instance hashes equal: " << (inst1.id == inst2.id ? "yes" : "NO") << "; " << files
      << " CSV files byte-identical plus manifests: " << (ok ? "yes" : "NO");
  return ok;
}

}  // namespace

int main() {
  std::vector<Criterion> criteria{
      {1, "flat-space oracle vs reference integration", 10.0, criterion_flat_oracle},
      {2, "geometry suite (roundtrip / isometry / gradient-FD)", 30.0, criterion_geometry},
      {3, "Hessian eigenvalue sandwich", 30.0, criterion_hessian_sandwich},
      {4, "energy monotonicity across the sweeps", 120.0, criterion_energy_monotonicity},
      {5, "sub-critical Lyapunov energy monotonicity", 120.0, criterion_subcritical_energy},
      {6, "phase transition of fitted exponents", 60.0, criterion_phase_transition},
      {7, "little-o signature at alpha = 2 delta", 60.0, criterion_little_o},
      {8, "stagnation protocol for the scaled gap", 60.0, criterion_stagnation_protocol},
      {9, "trajectory convergence to the Karcher mean", 60.0, criterion_trajectory_convergence},
      {10, "Karcher oracle closed-form checks", 30.0, criterion_karcher_oracle},
      {11, "bitwise determinism of seeded sweeps", 60.0, criterion_determinism},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::ostringstream detail;
    bool pass = false;
    try {
      pass = c.body(detail);
    } catch (const std::exception& e) {
      detail << "exception: " << e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.budget_seconds) {
      pass = false;
      detail << " [over the " << c.budget_seconds << " s budget]";
    }
    if (!pass) ++failures;
    std::printf("[%s] criterion %2d: %s (%.1f s)\n  %s\n", pass ? "PASS" : "FAIL", c.id,
                c.name.c_str(), secs, detail.str().c_str());
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures;
}
