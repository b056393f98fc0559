#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "riemflow/diagnostics.hpp"
#include "riemflow/instance.hpp"
#include "riemflow/integrator.hpp"
#include "riemflow/io.hpp"

namespace riemflow {

/// Benchmark instance description. Desk-scale defaults keep the full
/// acceptance sweep cheap; paper-scale values (eigenvalue m=1000, n=2500,
/// beta=1000; karcher m=10, n=100) remain accepted.
struct InstanceSpec {
  std::string problem = "eigenvalue";  // eigenvalue | karcher | flat
  int m = 200;                         // rows of G / number of SPD matrices
  int n = 50;                          // ambient dimension / matrix size
  double beta = 100.0;                 // eigenvalue instance scaling A = G^T G / beta
  double eig_lo = 0.0;                 // karcher eigenvalue range (lo, hi)
  double eig_hi = 100.0;
  std::uint64_t seed = 1;
  // curvature knobs; NaN means "use the default heuristic"
  double k_min = std::numeric_limits<double>::quiet_NaN();  // spd default: -0.1
  double diameter = std::numeric_limits<double>::quiet_NaN();
  double diameter_safety = 1.0;
  double karcher_oracle_tol = 1e-10;

  void validate() const;
};

ProblemInstance gen_eigenvalue_instance(const InstanceSpec& spec);
ProblemInstance gen_karcher_instance(const InstanceSpec& spec);
ProblemInstance gen_flat_instance(const InstanceSpec& spec);
ProblemInstance gen_instance(const InstanceSpec& spec);

/// Karcher benchmark oracle: the fixed-point iteration
///   P <- Exp_P( -(1 / 2m) grad f(P) ) = Exp_P( (1/m) sum_j Log_P(A_j) )
/// run until the Riemannian gradient norm is at most tol. Throws on
/// non-convergence. The returned oracle is self-certifying: callers can
/// re-check the gradient norm through the objective.
BenchmarkOracle karcher_oracle(const std::vector<Matrix>& mats, const Point& p0, double tol = 1e-10,
                               int max_iters = 1000);

/// Closed-form two-matrix Karcher mean: the geodesic midpoint
/// A1 # A2 = A1^{1/2} (A1^{-1/2} A2 A1^{-1/2})^{1/2} A1^{1/2}.
Matrix geodesic_midpoint(const Matrix& a1, const Matrix& a2);

/// Post-processing of one run: rate fit over the last non-stagnated decade,
/// energy monotonicity margin, stagnation time and endpoint quantities.
struct RunSummary {
  double alpha = 0.0;
  std::optional<RateFit> rate;  // absent when the window has too few samples
  double max_energy_increase = 0.0;
  double energy_slack = 0.0;  // 1e-8 (1 + W_0)
  double max_subcritical_increase = std::numeric_limits<double>::quiet_NaN();
  double stagnation_t = std::numeric_limits<double>::quiet_NaN();
  double final_gap = 0.0;
  double final_dist2 = 0.0;
  int overshoot_warnings = 0;
  bool containment_ok = true;
  bool completed = true;
  std::string error;
};

RunSummary summarize_run(const ProblemInstance& instance, const Trajectory& traj);

/// Writes the per-sample trajectory dump:
///   t,f_gap,t2_f_gap,grad_norm,speed,energy,dist_to_ref,containment
/// (t2_f_gap is stagnation-truncated and prints as nan past the cutoff;
/// dist_to_ref is the squared geodesic distance to the oracle minimizer).
void write_trajectory_csv(const std::filesystem::path& path, const ProblemInstance& instance,
                          const Trajectory& traj);

/// Writes the diagnostics CSV: t,W,scaled_gap,h plus subcritical_W when
/// alpha <= delta.
void write_diagnostics_csv(const std::filesystem::path& path, const ProblemInstance& instance,
                           const Trajectory& traj);

json summary_to_json(const RunSummary& s);
json profile_to_json(const CurvatureProfile& p);
CurvatureProfile profile_from_json(const json& j);
json spec_to_json(const InstanceSpec& spec);
InstanceSpec spec_from_json(const json& j);

struct SweepRunRecord {
  double alpha = 0.0;
  std::string status = "ok";
  std::string trajectory_file;
  std::string diagnostics_file;
  std::string summary_file;
  RunSummary summary;
};

struct SweepResult {
  std::vector<SweepRunRecord> runs;
  std::filesystem::path manifest_path;
};

/// Runs one trajectory per alpha, writing per-run CSVs and summaries under
/// outdir plus a manifest JSON. Independent runs execute concurrently;
/// RIEMFLOW_THREADS caps the worker count. Per-run failures are recorded in
/// the manifest and the sweep continues.
SweepResult sweep(const ProblemInstance& instance, const InstanceSpec& spec,
                  const std::vector<double>& alphas, const SolverConfig& base,
                  const std::filesystem::path& outdir);

/// Instance + per-alpha plot-data tables (t, one column per alpha) for the
/// objective gap and the scaled gap, regenerated from a sweep's CSV files.
void write_report(const std::filesystem::path& manifest_path,
                  const std::filesystem::path& outdir);

}  // namespace riemflow
