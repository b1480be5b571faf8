#include "spd/operator_pencils.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "doctest.h"
#include "spd/combinatorics.hpp"
#include "spd/linalg_core.hpp"
#include "spd/rng.hpp"
#include "spd/sym_geometry.hpp"

using spd::CMat;
using spd::Complex;
using spd::CVec;
using spd::OperatorTuple;

namespace {

// Commuting normal contractions sharing one eigenbasis, fed through the
// elementary symmetric sums. Joint spectrum stays strictly inside the
// polydisc of the given radius.
OperatorTuple normal_instance(int n, int dim, std::uint64_t seed, double radius = 0.9) {
  spd::Rng rng(seed);
  const CMat v = spd::random_unitary(dim, rng);
  std::vector<CMat> as;
  as.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    CVec d(dim);
    for (int p = 0; p < dim; ++p) d(p) = spd::random_disc(rng, radius);
    as.push_back(v * d.asDiagonal() * v.adjoint());
  }
  return {spd::elementary_symmetric_ops(as)};
}

std::vector<CMat> commuting_unitaries(int n, int dim, std::uint64_t seed) {
  spd::Rng rng(seed);
  const CMat v = spd::random_unitary(dim, rng);
  std::vector<CMat> us;
  us.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    CVec d(dim);
    for (int p = 0; p < dim; ++p) d(p) = spd::random_phase(rng);
    us.push_back(v * d.asDiagonal() * v.adjoint());
  }
  return us;
}

const spd::CheckItem& find_item(const std::vector<spd::CheckItem>& items,
                                const std::string& name) {
  for (const spd::CheckItem& c : items)
    if (c.name == name) return c;
  REQUIRE(false);
  return items.front();
}

std::vector<Complex> small_grid() { return spd::alpha_grid(8); }

}  // namespace

TEST_SUITE("operator_pencils") {

TEST_CASE("tuple commute_check matches the nilpotent example") {
  OperatorTuple single;
  single.ops.push_back(CMat::Random(3, 3));
  const auto one = spd::commute_check(single);
  CHECK(one.ok);
  CHECK(one.max_commutator == 0.0);

  CMat up = CMat::Zero(2, 2), down = CMat::Zero(2, 2);
  up(0, 1) = 1.0;
  down(1, 0) = 1.0;
  const auto pair = spd::commute_check(OperatorTuple{{up, down}});
  CHECK_FALSE(pair.ok);
  CHECK(pair.max_commutator == doctest::Approx(1.0));
  CHECK_THROWS_AS(spd::require_commuting(OperatorTuple{{up, down}}),
                  std::invalid_argument);
}

TEST_CASE("elementary symmetric sums of diagonals match the scalar symmetrize") {
  spd::Rng rng(71);
  const int n = 4, dim = 5;
  std::vector<CMat> as;
  CMat zs(dim, n);
  for (int k = 0; k < n; ++k) {
    CVec d(dim);
    for (int p = 0; p < dim; ++p) {
      d(p) = spd::random_disc(rng);
      zs(p, k) = d(p);
    }
    as.push_back(CMat(d.asDiagonal()));
  }
  const std::vector<CMat> es = spd::elementary_symmetric_ops(as);
  REQUIRE(static_cast<int>(es.size()) == n);
  for (int p = 0; p < dim; ++p) {
    const CVec s = spd::symmetrize(zs.row(p).transpose());
    for (int i = 0; i < n; ++i) CHECK(std::abs(es[i](p, p) - s(i)) <= 1e-12);
  }
  for (const CMat& e : es) CHECK(e.cwiseAbs().sum() == doctest::Approx(e.diagonal().cwiseAbs().sum()));
}

TEST_CASE("pencil at the zero tuple is k^2 I") {
  const int n = 3, dim = 4;
  OperatorTuple t;
  for (int k = 0; k < n; ++k) t.ops.push_back(CMat::Zero(dim, dim));
  for (int i = 1; i <= n - 1; ++i) {
    const auto ev = spd::op_pencil(i, Complex(0.7, 0.2), t);
    const double k2 = static_cast<double>(spd::k_const(n, i) * spd::k_const(n, i));
    CHECK(spd::op_norm(ev.phi1 - k2 * CMat::Identity(dim, dim)) == 0.0);
    CHECK(spd::op_norm(ev.phi2 - k2 * CMat::Identity(dim, dim)) == 0.0);
    CHECK(ev.min_eig1 == doctest::Approx(k2));
    CHECK(ev.herm_dev == 0.0);
  }
  CHECK_THROWS_AS(spd::op_pencil(0, Complex(1.0, 0.0), t), std::invalid_argument);
  CHECK_THROWS_AS(spd::op_pencil(n, Complex(1.0, 0.0), t), std::invalid_argument);
}

TEST_CASE("1x1 tuples reproduce the scalar pencils") {
  spd::Rng rng(72);
  for (int n = 2; n <= 5; ++n) {
    for (int rep = 0; rep < 20; ++rep) {
      CVec z(n);
      for (int k = 0; k < n; ++k) z(k) = spd::random_disc(rng);
      const CVec s = spd::symmetrize(z);
      OperatorTuple t;
      for (int k = 0; k < n; ++k) {
        CMat m(1, 1);
        m(0, 0) = s(k);
        t.ops.push_back(m);
      }
      const double mod = (rep % 3 == 0) ? 1.0 : 0.3 + 0.5 * (rep % 3);
      const Complex alpha = mod * spd::random_phase(rng);
      for (int i = 1; i <= n - 1; ++i) {
        const auto ev = spd::op_pencil(i, alpha, t);
        const auto sc = spd::scalar_pencils(i, alpha, s);
        CHECK(std::abs(ev.phi1(0, 0).real() - sc.phi1) <= 1e-12);
        CHECK(std::abs(ev.phi2(0, 0).real() - sc.phi2) <= 1e-12);
        CHECK(std::abs(ev.phi1(0, 0).imag()) <= 1e-14);
      }
    }
  }
}

TEST_CASE("pencil equals the difference of the two Gram matrices") {
  const OperatorTuple t = normal_instance(3, 5, 73);
  const int n = 3;
  spd::Rng rng(74);
  for (int rep = 0; rep < 8; ++rep) {
    const Complex alpha = (0.25 + 0.25 * (rep % 4)) * spd::random_phase(rng);
    for (int i = 1; i <= n - 1; ++i) {
      const double k = static_cast<double>(spd::k_const(n, i));
      Complex ai(1.0, 0.0), ani(1.0, 0.0), an(1.0, 0.0);
      for (int p = 0; p < i; ++p) ai *= alpha;
      for (int p = 0; p < n - i; ++p) ani *= alpha;
      an = ai * ani;
      const CMat id = CMat::Identity(t.dim(), t.dim());
      const CMat x = k * id - ai * t.op(i);
      const CMat y = k * an * t.op(n) - ani * t.op(n - i);
      const CMat gram = x.adjoint() * x - y.adjoint() * y;
      const auto ev = spd::op_pencil(i, alpha, t);
      CHECK(spd::op_norm(ev.phi1 - gram) <= 1e-11);
      CHECK(spd::herm_deviation(ev.phi1) == 0.0);
    }
  }
}

TEST_CASE("necessary suite passes on a symmetrized normal tuple") {
  const OperatorTuple t = normal_instance(3, 4, 75);
  const auto rep = spd::necessary_contraction_suite(t, small_grid());
  CHECK(rep.pass);
  CHECK(rep.min_pencil_eig >= -1e-10);
  CHECK(rep.max_commutator <= 1e-10 * static_cast<double>(t.dim()));
  CHECK(rep.note.find("necessary") != std::string::npos);
  for (const auto& c : rep.checks) CHECK(c.pass);
}

TEST_CASE("necessary suite flags a norm violation") {
  OperatorTuple t;
  t.ops.push_back(CMat::Zero(3, 3));
  t.ops.push_back(1.2 * CMat::Identity(3, 3));
  const auto rep = spd::necessary_contraction_suite(t, small_grid());
  CHECK_FALSE(rep.pass);
  CHECK_FALSE(find_item(rep.checks, "norm_bounds").pass);
  CHECK(find_item(rep.checks, "norm_bounds").residual == doctest::Approx(0.2));
}

TEST_CASE("necessary suite flags a joint eigenvalue outside the domain") {
  // Scalar point with admissible coordinate norms whose roots are 1.05 and
  // 0.9: only the spectral test can see it.
  OperatorTuple t;
  CMat s1(1, 1), s2(1, 1);
  s1(0, 0) = 1.95;
  s2(0, 0) = 0.945;
  t.ops = {s1, s2};
  const auto rep = spd::necessary_contraction_suite(t, small_grid());
  CHECK_FALSE(rep.pass);
  CHECK(find_item(rep.checks, "norm_bounds").pass);
  CHECK_FALSE(find_item(rep.checks, "joint_spectrum_membership").pass);
}

TEST_CASE("necessary suite flags a non-commuting tuple") {
  CMat up = CMat::Zero(2, 2), down = CMat::Zero(2, 2);
  up(0, 1) = 0.5;
  down(1, 0) = 0.5;
  const auto rep = spd::necessary_contraction_suite(OperatorTuple{{up, down}}, small_grid());
  CHECK_FALSE(rep.pass);
  CHECK_FALSE(find_item(rep.checks, "commuting").pass);
}

TEST_CASE("necessary suite verdicts are unitary-conjugation invariant") {
  const OperatorTuple t = normal_instance(3, 4, 76);
  spd::Rng rng(77);
  const CMat w = spd::random_unitary(4, rng);
  const OperatorTuple t2 = spd::conjugate_tuple(t, w);
  const auto r1 = spd::necessary_contraction_suite(t, small_grid());
  const auto r2 = spd::necessary_contraction_suite(t2, small_grid());
  REQUIRE(r1.checks.size() == r2.checks.size());
  CHECK(r1.pass == r2.pass);
  for (std::size_t k = 0; k < r1.checks.size(); ++k) {
    CHECK(r1.checks[k].name == r2.checks[k].name);
    CHECK(r1.checks[k].pass == r2.checks[k].pass);
    if (r1.checks[k].name == "norm_bounds" || r1.checks[k].name == "pencil_psd" ||
        r1.checks[k].name == "joint_spectrum_membership")
      CHECK(std::abs(r1.checks[k].residual - r2.checks[k].residual) <= 1e-8);
  }
}

TEST_CASE("construction from identity unitaries gives binomial multiples") {
  const int n = 3, dim = 3;
  std::vector<CMat> us(static_cast<std::size_t>(n), CMat::Identity(dim, dim));
  const OperatorTuple t = spd::gamma_unitary_from_unitaries(us);
  for (int i = 1; i <= n; ++i) {
    const double c = static_cast<double>(spd::binom(n, i));
    CHECK(spd::op_norm(t.op(i) - c * CMat::Identity(dim, dim)) <= 1e-14);
  }
}

TEST_CASE("construction from commuting unitaries is a certified unitary tuple") {
  const std::vector<CMat> us = commuting_unitaries(3, 4, 78);
  const OperatorTuple t = spd::gamma_unitary_from_unitaries(us);

  const CMat id = CMat::Identity(4, 4);
  CHECK(spd::op_norm(t.op(3).adjoint() * t.op(3) - id) <= 1e-12);
  for (int i = 1; i <= 2; ++i)
    CHECK(spd::op_norm(t.op(i) - t.op(3 - i).adjoint() * t.op(3)) <= 1e-12);

  const auto u = spd::classify_unitary(t);
  CHECK(u.cls == spd::TupleClass::GammaUnitary);
  CHECK(u.note.find("certified") != std::string::npos);
  for (const auto& c : u.evidence) CHECK(c.pass);

  const auto iso = spd::classify_isometry(t);
  CHECK(iso.cls == spd::TupleClass::GammaUnitary);
  CHECK(find_item(iso.evidence, "pencil_vanishing").residual <= 1e-10);
  CHECK(find_item(iso.evidence, "sn_isometry").pass);
}

TEST_CASE("construction validates its inputs") {
  std::vector<CMat> bad = {0.5 * CMat::Identity(2, 2)};
  CHECK_THROWS_AS(spd::gamma_unitary_from_unitaries(bad), std::invalid_argument);

  CMat flip = CMat::Zero(2, 2);
  flip(0, 1) = 1.0;
  flip(1, 0) = 1.0;
  CMat sign = CMat::Identity(2, 2);
  sign(1, 1) = -1.0;
  CHECK_THROWS_AS(spd::gamma_unitary_from_unitaries({flip, sign}),
                  std::invalid_argument);
}

TEST_CASE("classifier rejects a broken conjugate pairing") {
  const std::vector<CMat> us = commuting_unitaries(3, 3, 79);
  OperatorTuple t = spd::gamma_unitary_from_unitaries(us);
  t.op(1) *= 1.05;
  const auto u = spd::classify_unitary(t);
  CHECK(u.cls == spd::TupleClass::Fail);
  CHECK_FALSE(find_item(u.evidence, "conjugate_pairing").pass);
}

TEST_CASE("classifier rejects a non-unitary final member") {
  OperatorTuple t;
  t.ops.push_back(CMat::Zero(2, 2));
  CMat d = CMat::Identity(2, 2);
  d(1, 1) = 0.5;
  t.ops.push_back(d);
  CHECK(spd::classify_unitary(t).cls == spd::TupleClass::Fail);
  CHECK(spd::classify_isometry(t).cls == spd::TupleClass::Fail);
}

TEST_CASE("composite classifier distinguishes unitary from interior tuples") {
  const OperatorTuple tu =
      spd::gamma_unitary_from_unitaries(commuting_unitaries(2, 3, 80));
  CHECK(spd::classify_tuple(tu).cls == spd::TupleClass::GammaUnitary);

  const OperatorTuple ti = normal_instance(3, 4, 81, 0.8);
  const auto v = spd::classify_tuple(ti);
  CHECK(v.cls == spd::TupleClass::NecessaryPass);
  CHECK(v.note.find("necessary") != std::string::npos);

  OperatorTuple bad;
  CMat s1(1, 1), s2(1, 1);
  s1(0, 0) = 1.95;
  s2(0, 0) = 0.945;
  bad.ops = {s1, s2};
  CHECK(spd::classify_tuple(bad).cls == spd::TupleClass::Fail);
}

TEST_CASE("mobius quotients are isometric when the gate is open") {
  const std::vector<CMat> us = commuting_unitaries(4, 3, 82);
  const OperatorTuple t = spd::gamma_unitary_from_unitaries(us);
  const auto iso = spd::classify_isometry(t);
  const auto& gate = find_item(iso.evidence, "mobius_gate_margin");
  if (gate.residual < 0.0) {
    const auto& mob = find_item(iso.evidence, "mobius_isometry");
    CHECK(mob.pass);
  }
}

TEST_CASE("isometry implication triggers on unitary constructions and not on zero") {
  const OperatorTuple t =
      spd::gamma_unitary_from_unitaries(commuting_unitaries(3, 3, 83));
  const auto rep = spd::isometry_implies_contraction_check(t);
  CHECK(rep.triggered);
  CHECK(rep.pass);
  CHECK(find_item(rep.checks, "pairing_direct").residual <= 1e-10);
  CHECK(find_item(rep.checks, "gram_balance").residual <= 1e-10);

  OperatorTuple zero;
  for (int k = 0; k < 2; ++k) zero.ops.push_back(CMat::Zero(3, 3));
  const auto vac = spd::isometry_implies_contraction_check(zero);
  CHECK_FALSE(vac.triggered);
  CHECK(vac.pass);
}

TEST_CASE("beta grid sits on the unit circle") {
  const auto grid = spd::beta_grid();
  CHECK(grid.size() == 128);
  for (const Complex& b : grid) CHECK(std::abs(std::abs(b) - 1.0) <= 1e-15);
  const auto four = spd::beta_grid(4);
  CHECK(std::abs(four[0] - Complex(1.0, 0.0)) <= 1e-15);
  CHECK(std::abs(four[1] - Complex(0.0, 1.0)) <= 1e-15);
}

TEST_CASE("spectral radius matches known spectra") {
  CMat d = CMat::Zero(2, 2);
  d(0, 0) = Complex(0.3, 0.0);
  d(1, 1) = Complex(0.0, -0.9);
  CHECK(spd::spectral_radius(d) == doctest::Approx(0.9));
  CMat nil = CMat::Zero(3, 3);
  nil(0, 1) = 5.0;
  nil(1, 2) = 5.0;
  CHECK(spd::spectral_radius(nil) <= 1e-7);
}

}  // TEST_SUITE
