#pragma once

#include <memory>
#include <string>

#include "riemflow/curvature.hpp"
#include "riemflow/manifold.hpp"
#include "riemflow/objective.hpp"

namespace riemflow {

/// Benchmark minimum: f* and a reference minimizer, produced by an in-repo
/// oracle (dense eigensolve / fixed-point iteration), never by the solver
/// trajectory itself.
struct BenchmarkOracle {
  double fstar = 0.0;
  Point zref;
  std::string method;
};

/// A ready-to-solve problem: objective (which owns its manifold), initial
/// point, benchmark oracle and the curvature profile that governs the rate
/// predictions. `id` is a hash of the problem data.
struct ProblemInstance {
  std::string problem;  // eigenvalue | karcher | flat
  std::shared_ptr<const Objective> objective;
  Point x0;
  BenchmarkOracle oracle;
  CurvatureProfile profile;
  std::string id;

  const Manifold& manifold() const { return objective->manifold(); }
};

}  // namespace riemflow
