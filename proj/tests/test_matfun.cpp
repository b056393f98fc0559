#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "riemflow/matfun.hpp"
#include "riemflow/rng.hpp"

#include "oracles.hpp"

using namespace riemflow;

namespace {

Matrix random_symmetric(Rng& rng, int n, double scale) {
  return scale * symmetrize(rng.normal_matrix(n, n));
}

}  // namespace

TEST_CASE("sym_expm matches the Pade oracle on random symmetric matrices") {
  Rng rng(101);
  for (int trial = 0; trial < 30; ++trial) {
    const Matrix s = random_symmetric(rng, 6, 0.8);
    const Matrix ours = sym_expm(s);
    const Matrix ref = oracles::expm_pade(s);
    CHECK((ours - ref).norm() <= 1e-11 * (1.0 + ref.norm()));
  }
}

TEST_CASE("sym_logm inverts sym_expm") {
  Rng rng(102);
  for (int trial = 0; trial < 30; ++trial) {
    const Matrix w = random_symmetric(rng, 5, 1.0);
    CHECK((sym_logm(sym_expm(w)) - w).norm() <= 1e-10 * (1.0 + w.norm()));
  }
}

TEST_CASE("sym_sqrt matches Denman-Beavers on SPD matrices") {
  Rng rng(103);
  for (int trial = 0; trial < 30; ++trial) {
    const Matrix p = sym_expm(random_symmetric(rng, 6, 0.7));
    const Matrix ours = sym_sqrt(p);
    const Matrix ref = oracles::sqrtm_denman_beavers(p);
    CHECK((ours - ref).norm() <= 1e-10 * (1.0 + ref.norm()));
    CHECK((ours * ours - p).norm() <= 1e-11 * (1.0 + p.norm()));
  }
}

TEST_CASE("sym_inv_sqrt times sym_sqrt is the identity") {
  Rng rng(104);
  const Matrix p = sym_expm(random_symmetric(rng, 7, 0.5));
  const Matrix id = sym_sqrt(p) * sym_inv_sqrt(p);
  CHECK((id - Matrix::Identity(7, 7)).norm() <= 1e-12);
}

TEST_CASE("sym_logm rejects non-positive-definite input") {
  Matrix s = Matrix::Identity(3, 3);
  s(2, 2) = -0.5;
  CHECK_THROWS_AS(sym_logm(s), std::runtime_error);
  CHECK_THROWS_AS(sym_inv_sqrt(Matrix::Zero(3, 3)), std::runtime_error);
}

TEST_CASE("identity cases") {
  const Matrix id = Matrix::Identity(4, 4);
  CHECK((sym_expm(Matrix::Zero(4, 4)) - id).norm() == doctest::Approx(0.0));
  CHECK((sym_logm(id)).norm() == doctest::Approx(0.0));
  CHECK((sym_expm(id) - std::exp(1.0) * id).norm() <= 1e-14 * std::exp(1.0));
}
