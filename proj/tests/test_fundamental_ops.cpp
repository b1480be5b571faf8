#include "spd/fundamental_ops.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "doctest.h"
#include "spd/combinatorics.hpp"
#include "spd/corpus.hpp"
#include "spd/linalg_core.hpp"
#include "spd/operator_pencils.hpp"
#include "spd/rng.hpp"

using spd::CMat;
using spd::Complex;
using spd::CVec;
using spd::FundamentalOperators;
using spd::OperatorTuple;
using spd::Side;

namespace {

const spd::CheckItem& find_item(const std::vector<spd::CheckItem>& items,
                                const std::string& name) {
  for (const spd::CheckItem& c : items)
    if (c.name == name) return c;
  REQUIRE(false);
  return items.front();
}

double max_residual(const FundamentalOperators& fo) {
  double r = 0.0;
  for (double v : fo.residuals) r = std::max(r, v);
  for (double v : fo.off_defect) r = std::max(r, v);
  return r;
}

}  // namespace

TEST_SUITE("fundamental_ops") {

TEST_CASE("zero pair has a zero fundamental operator on a full defect") {
  const OperatorTuple t = spd::make_tuple(
      {CMat::Zero(1, 1), CMat::Zero(1, 1)});
  const FundamentalOperators fo = spd::solve_fundamental(t);
  CHECK(fo.n == 2);
  CHECK(fo.rank == 1);
  CHECK(std::abs(fo.defect(0, 0) - Complex(1.0, 0.0)) <= 1e-15);
  CHECK(std::abs(fo.compressed(1)(0, 0)) <= 1e-15);
  CHECK(max_residual(fo) <= 1e-14);
  CHECK(fo.within_tol);
  CHECK_THROWS_AS((void)fo.compressed(0), std::out_of_range);
  CHECK_THROWS_AS((void)fo.compressed(2), std::out_of_range);
}

TEST_CASE("unitary final member leaves an empty defect and tiny residuals") {
  const OperatorTuple t = spd::gamma_unitary_from_unitaries(
      spd::commuting_unitary_family(3, 4, 411));
  const FundamentalOperators fo = spd::solve_fundamental(t);
  CHECK(fo.rank == 0);
  CHECK(fo.within_tol);
  CHECK(max_residual(fo) <= 1e-12);
  CHECK(fo.ambient(1).rows() == 4);
  CHECK(spd::op_norm(fo.ambient(2)) <= 1e-15);
  const spd::UniquenessReport uq = spd::uniqueness_check(t);
  CHECK(uq.pass);
  CHECK(uq.max_deviation == 0.0);
}

TEST_CASE("solver meets its residual contract on symmetrized corpora") {
  for (std::uint64_t seed : {7u, 8u, 9u}) {
    const OperatorTuple t3 = spd::normal_symmetrization_instance(3, 5, seed);
    const FundamentalOperators e3 = spd::solve_fundamental(t3);
    CHECK(max_residual(e3) <= 1e-10);
    CHECK(e3.rank == 5);

    const OperatorTuple t4 = spd::normal_symmetrization_instance(4, 6, seed);
    CHECK(max_residual(spd::solve_fundamental(t4)) <= 1e-10);

    const OperatorTuple p = spd::polynomial_pair_instance(6, seed);
    CHECK(max_residual(spd::solve_fundamental(p)) <= 1e-10);
  }
}

TEST_CASE("inadmissible inputs are rejected") {
  CHECK_THROWS_AS(
      (void)spd::solve_fundamental(spd::make_tuple({CMat::Zero(2, 2)})),
      std::invalid_argument);
  const OperatorTuple big =
      spd::make_tuple({CMat::Identity(2, 2), 1.2 * CMat::Identity(2, 2)});
  CHECK_THROWS_AS((void)spd::solve_fundamental(big), std::domain_error);
}

TEST_CASE("adjoint side equals the direct solve of the adjoint tuple") {
  const OperatorTuple t = spd::polynomial_pair_instance(5, 23);
  const FundamentalOperators f = spd::solve_fundamental(t, Side::Adjoint);
  const FundamentalOperators g =
      spd::solve_fundamental(spd::adjoint_tuple(t), Side::Direct);
  REQUIRE(f.rank == g.rank);
  CHECK(spd::op_norm(f.compressed(1) - g.compressed(1)) == 0.0);
  const spd::DefectPair dstar = spd::defect_pair(t.op(2).adjoint());
  CHECK(spd::op_norm(f.defect - dstar.defect) <= 1e-14);
}

TEST_CASE("solutions are unique under basis and cutoff perturbations") {
  for (std::uint64_t seed : {31u, 32u}) {
    CHECK(spd::uniqueness_check(spd::polynomial_pair_instance(6, seed)).pass);
    const spd::UniquenessReport uq =
        spd::uniqueness_check(spd::normal_symmetrization_instance(3, 5, seed));
    CHECK(uq.pass);
    CHECK(uq.max_deviation <= 1e-9);
  }
}

TEST_CASE("rank-one defect instances have scalar fundamental operators") {
  const OperatorTuple t = spd::gate_pass_instance(5, 77);
  const FundamentalOperators fo = spd::solve_fundamental(t);
  CHECK(fo.rank == 1);
  CHECK(max_residual(fo) <= 1e-10);
  const spd::CommutationGates gates = spd::prop66_conditions(fo);
  CHECK(gates.pass);
  CHECK(gates.commutator_family == 0.0);
  CHECK(gates.mixed_family <= 1e-15);
  CHECK(spd::radius_bound_check(fo, 3).pass);
}

TEST_CASE("pair radius maximum matches the scalar formula") {
  CMat x(1, 1), y(1, 1);
  x(0, 0) = Complex(0.3, 0.4);
  y(0, 0) = Complex(-0.2, 0.5);
  const double got = spd::pair_numerical_radius_max(x, y, 720);
  const double want = std::abs(x(0, 0)) + std::abs(y(0, 0));
  CHECK(got <= want + 1e-12);
  CHECK(got >= want - 1e-3);
  CHECK(spd::pair_numerical_radius_max(CMat(0, 0), CMat(0, 0)) == 0.0);
  CHECK_THROWS_AS(
      (void)spd::pair_numerical_radius_max(CMat::Zero(2, 2), CMat::Zero(3, 3)),
      std::invalid_argument);
}

TEST_CASE("numerical radius bounds hold across the solved corpus") {
  for (std::uint64_t seed : {51u, 52u}) {
    for (int n : {2, 3, 4}) {
      const OperatorTuple t = spd::normal_symmetrization_instance(n, 5, seed);
      const FundamentalOperators fo = spd::solve_fundamental(t);
      const spd::RadiusReport rr = spd::radius_bound_check(fo, n);
      CHECK(rr.pass);
      for (int i = 1; i <= n - 1; ++i) {
        const std::size_t idx = static_cast<std::size_t>(i - 1);
        CHECK(rr.bound[idx] ==
              static_cast<double>(spd::k_const(n, i)));
        CHECK(rr.plain[idx] <= rr.bound[idx] + 1e-8);
        CHECK(rr.starred[idx] <= rr.bound[idx] + 1e-8);
      }
    }
    const FundamentalOperators fp =
        spd::solve_fundamental(spd::polynomial_pair_instance(6, seed));
    CHECK(spd::radius_bound_check(fp, 2).pass);
  }
  CHECK_THROWS_AS(
      (void)spd::radius_bound_check(FundamentalOperators{}, 3),
      std::invalid_argument);
}

TEST_CASE("pencil commutation conditions agree across their four forms") {
  spd::Rng rng(99);
  CVec d1(3), d2(3);
  for (int p = 0; p < 3; ++p) {
    d1(p) = spd::random_disc(rng);
    d2(p) = spd::random_disc(rng);
  }
  const std::vector<CMat> good = {CMat(d1.asDiagonal()), CMat(d2.asDiagonal())};
  const spd::Lemma43Report ok = spd::lemma43_check(good);
  CHECK(ok.agree);
  for (const spd::CheckItem& it : ok.items) CHECK(it.pass);

  CMat a1 = CMat::Zero(2, 2);
  a1(0, 1) = 1.0;
  CMat a2 = CMat::Zero(2, 2);
  a2(0, 0) = 1.0;
  a2(1, 1) = 2.0;
  const spd::Lemma43Report bad = spd::lemma43_check({a1, a2});
  CHECK(bad.agree);
  for (const spd::CheckItem& it : bad.items) CHECK_FALSE(it.pass);
  CHECK(find_item(bad.items, "commutator_family").residual >= 0.9);

  // Self-paired singleton: A* + Az is unitary for every unimodular z, so all
  // four conditions hold even for a nonnormal A.
  const spd::Lemma43Report nil = spd::lemma43_check({a1});
  CHECK(nil.agree);
  for (const spd::CheckItem& it : nil.items) CHECK(it.pass);

  CHECK_THROWS_AS((void)spd::lemma43_check({}), std::invalid_argument);
}

TEST_CASE("interlacing identities hold for solved families") {
  for (std::uint64_t seed : {61u, 62u}) {
    const OperatorTuple t2 = spd::polynomial_pair_instance(5, seed);
    const spd::Lemma72Report r2 = spd::lemma72_suite(
        t2, spd::solve_fundamental(t2), spd::solve_fundamental(t2, Side::Adjoint));
    CHECK(r2.pass);
    CHECK(r2.total_pairs == 0);

    const OperatorTuple t3 = spd::normal_symmetrization_instance(3, 5, seed);
    const spd::Lemma72Report r3 = spd::lemma72_suite(
        t3, spd::solve_fundamental(t3), spd::solve_fundamental(t3, Side::Adjoint));
    CHECK(r3.pass);
    CHECK(r3.total_pairs == 1);
    CHECK(r3.gated_pairs_direct == 1);
    CHECK(r3.gated_pairs_adjoint == 1);
    CHECK(find_item(r3.items, "defect_commutation").residual <= 1e-12);
  }
  const OperatorTuple u = spd::gamma_unitary_from_unitaries(
      spd::commuting_unitary_family(3, 4, 63));
  const spd::Lemma72Report ru = spd::lemma72_suite(
      u, spd::solve_fundamental(u), spd::solve_fundamental(u, Side::Adjoint));
  CHECK(ru.pass);
}

TEST_CASE("gate failure instances produce noncommuting fundamental operators") {
  const OperatorTuple t = spd::gate_fail_instance(4, 301);
  const OperatorTuple t_again = spd::gate_fail_instance(4, 301);
  CHECK(spd::op_norm(t.op(1) - t_again.op(1)) == 0.0);
  const FundamentalOperators fo = spd::solve_fundamental(t);
  REQUIRE(fo.rank >= 2);
  CHECK(spd::commutator_norm(fo.compressed(1), fo.compressed(2)) >= 1e-3);
  CHECK_FALSE(spd::prop66_conditions(fo).pass);
  // The unconditional identities still hold; only the gated pair is skipped.
  const spd::Lemma72Report rep = spd::lemma72_suite(
      t, fo, spd::solve_fundamental(t, Side::Adjoint));
  CHECK(rep.gated_pairs_direct == 0);
  CHECK(rep.pass);
}

TEST_CASE("solutions transform covariantly under unitary conjugation") {
  const OperatorTuple t = spd::polynomial_pair_instance(5, 402);
  const spd::InvarianceReport same =
      spd::unitary_equivalence_invariance(t, CMat::Identity(5, 5));
  CHECK(same.pass);
  CHECK(same.max_deviation <= 1e-13);

  spd::Rng rng(403);
  const CMat w = spd::random_unitary(5, rng);
  const spd::InvarianceReport rot = spd::unitary_equivalence_invariance(t, w);
  CHECK(rot.pass);
  CHECK(rot.max_deviation <= 1e-9);
  CHECK(rot.alignment_unitarity <= 1e-10);

  const OperatorTuple t3 = spd::normal_symmetrization_instance(3, 4, 404);
  spd::Rng rng2(405);
  CHECK(spd::unitary_equivalence_invariance(t3, spd::random_unitary(4, rng2)).pass);

  CHECK_THROWS_AS(
      (void)spd::unitary_equivalence_invariance(t, 2.0 * CMat::Identity(5, 5)),
      std::invalid_argument);
  CHECK_THROWS_AS(
      (void)spd::unitary_equivalence_invariance(t, CMat::Identity(4, 4)),
      std::invalid_argument);
}

}  // TEST_SUITE
