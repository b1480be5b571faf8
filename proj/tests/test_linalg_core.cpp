#include "spd/linalg_core.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "doctest.h"
#include "spd/rng.hpp"

using spd::CMat;
using spd::Complex;

namespace {

CMat random_square(int dim, spd::Rng& rng) { return spd::ginibre(dim, dim, rng); }

}  // namespace

TEST_SUITE("linalg_core") {

TEST_CASE("commute_check separates commuting from non-commuting pairs") {
  spd::Rng rng(11);
  const CMat a = random_square(5, rng);
  const CMat a2 = a * a;
  CHECK(spd::commute_check(a, a2));
  const CMat b = random_square(5, rng);
  CHECK_FALSE(spd::commute_check(a, b));
  CHECK(spd::commutator_norm(a, a2) < 1e-12 * spd::op_norm(a) * spd::op_norm(a));
}

TEST_CASE("psd_check accepts Gram matrices and rejects indefinite ones") {
  spd::Rng rng(12);
  const CMat g = random_square(6, rng);
  const CMat gram = g.adjoint() * g;
  const auto ok = spd::psd_check(gram);
  CHECK(ok.ok);
  CHECK(ok.min_eig >= -1e-10);

  CMat indef = gram;
  indef(0, 0) -= 2.0 * gram.cwiseAbs().maxCoeff();
  CHECK_FALSE(spd::psd_check(indef).ok);

  CHECK_FALSE(spd::psd_check(random_square(4, rng)).ok);  // not Hermitian
}

TEST_CASE("psd_sqrt squares back to the input") {
  spd::Rng rng(13);
  const CMat g = random_square(5, rng);
  const CMat gram = g.adjoint() * g;
  const CMat root = spd::psd_sqrt(gram);
  CHECK(spd::op_norm(root * root - gram) <= 1e-10 * spd::op_norm(gram));
  CHECK(spd::herm_deviation(root) <= 1e-12 * (1.0 + spd::op_norm(root)));
}

TEST_CASE("defect_pair satisfies D^2 + T*T = I and spans the right range") {
  spd::Rng rng(14);
  CMat t = random_square(6, rng);
  t *= 0.8 / spd::op_norm(t);
  const auto dp = spd::defect_pair(t);
  const CMat id = CMat::Identity(6, 6);
  CHECK(spd::op_norm(dp.defect * dp.defect + t.adjoint() * t - id) <= 1e-12);
  CHECK(dp.rank == 6);  // strict contraction: full defect rank
  CHECK(spd::op_norm(dp.basis.adjoint() * dp.basis - CMat::Identity(dp.rank, dp.rank)) <=
        1e-12);

  // A unitary has no defect directions.
  const CMat u = spd::random_unitary(5, rng);
  const auto du = spd::defect_pair(u);
  CHECK(du.rank == 0);
  CHECK(spd::op_norm(du.defect) <= 1e-6);

  // Partial isometry-style block: one exact unit singular direction.
  CMat mixed = CMat::Zero(3, 3);
  mixed(0, 0) = 1.0;
  mixed(1, 1) = 0.5;
  const auto dm = spd::defect_pair(mixed);
  CHECK(dm.rank == 2);
}

TEST_CASE("pseudoinverse satisfies the Penrose axioms, including rank-deficient input") {
  spd::Rng rng(15);
  for (int trial = 0; trial < 4; ++trial) {
    const int rows = 6, inner = (trial % 2 == 0) ? 3 : 6, cols = 5;
    const CMat a = spd::ginibre(rows, inner, rng) * spd::ginibre(inner, cols, rng);
    const CMat p = spd::pseudoinverse(a);
    const double scale = spd::op_norm(a);
    CHECK(spd::op_norm(a * p * a - a) <= 1e-9 * scale);
    CHECK(spd::op_norm(p * a * p - p) <= 1e-9 * spd::op_norm(p));
    CHECK(spd::herm_deviation(a * p) <= 1e-9);
    CHECK(spd::herm_deviation(p * a) <= 1e-9);
  }
}

TEST_CASE("numerical radius frozen values") {
  CMat nil = CMat::Zero(2, 2);
  nil(0, 1) = 1.0;
  CHECK(spd::numerical_radius(nil) == doctest::Approx(0.5).epsilon(1e-12));

  CMat herm = CMat::Zero(2, 2);
  herm(0, 0) = 1.0;
  herm(1, 1) = -2.0;
  CHECK(spd::numerical_radius(herm) == doctest::Approx(2.0).epsilon(1e-12));

  CMat norm = CMat::Zero(2, 2);
  norm(0, 0) = Complex(0.0, 1.0);
  norm(1, 1) = 0.5;
  CHECK(spd::numerical_radius(norm) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("numerical radius bounds: rho <= omega <= norm") {
  spd::Rng rng(16);
  for (int trial = 0; trial < 5; ++trial) {
    const CMat a = random_square(5, rng);
    const double w = spd::numerical_radius(a);
    CHECK(w <= spd::op_norm(a) + 1e-10);
    Eigen::ComplexEigenSolver<CMat> es(a);
    const double rho = es.eigenvalues().cwiseAbs().maxCoeff();
    CHECK(w >= rho - 1e-6);
  }
}

TEST_CASE("joint_eigenvalues recovers the spectrum of a conjugated diagonal family") {
  spd::Rng rng(17);
  const int dim = 5;
  const CMat q = spd::random_unitary(dim, rng);
  CMat d1 = CMat::Zero(dim, dim), d2 = CMat::Zero(dim, dim);
  std::vector<std::pair<Complex, Complex>> expected;
  for (int k = 0; k < dim; ++k) {
    d1(k, k) = spd::random_disc(rng);
    d2(k, k) = spd::random_disc(rng);
    expected.emplace_back(d1(k, k), d2(k, k));
  }
  const std::vector<CMat> family{q * d1 * q.adjoint(), q * d2 * q.adjoint()};
  const auto je = spd::joint_eigenvalues(family, 99);
  CHECK(je.triangular_residual <= 1e-8);

  auto key = [](const std::pair<Complex, Complex>& p) {
    return std::tuple<double, double, double, double>(p.first.real(), p.first.imag(),
                                                      p.second.real(), p.second.imag());
  };
  std::vector<std::pair<Complex, Complex>> got;
  for (int k = 0; k < dim; ++k) got.emplace_back(je.tuples(k, 0), je.tuples(k, 1));
  std::sort(expected.begin(), expected.end(),
            [&](const auto& x, const auto& y) { return key(x) < key(y); });
  std::sort(got.begin(), got.end(),
            [&](const auto& x, const auto& y) { return key(x) < key(y); });
  for (int k = 0; k < dim; ++k) {
    CHECK(std::abs(got[static_cast<std::size_t>(k)].first -
                   expected[static_cast<std::size_t>(k)].first) <= 1e-7);
    CHECK(std::abs(got[static_cast<std::size_t>(k)].second -
                   expected[static_cast<std::size_t>(k)].second) <= 1e-7);
  }
}

}  // TEST_SUITE
