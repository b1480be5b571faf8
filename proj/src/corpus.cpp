#include "spd/corpus.hpp"

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "spd/fundamental_ops.hpp"
#include "spd/linalg_core.hpp"
#include "spd/rng.hpp"

namespace spd {

OperatorTuple normal_symmetrization_instance(int n, int dim, std::uint64_t seed,
                                             double radius) {
  if (n < 1 || dim < 1)
    throw std::invalid_argument(
        "normal_symmetrization_instance: n and dim must be positive");
  Rng rng(seed);
  const CMat v = random_unitary(dim, rng);
  std::vector<CMat> as;
  as.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    CVec d(dim);
    for (int p = 0; p < dim; ++p) d(p) = random_disc(rng, radius);
    as.push_back(v * d.asDiagonal() * v.adjoint());
  }
  return make_tuple(elementary_symmetric_ops(as));
}

std::vector<CMat> commuting_unitary_family(int n, int dim, std::uint64_t seed) {
  if (n < 1 || dim < 1)
    throw std::invalid_argument(
        "commuting_unitary_family: n and dim must be positive");
  Rng rng(seed);
  const CMat v = random_unitary(dim, rng);
  std::vector<CMat> us;
  us.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    CVec d(dim);
    for (int p = 0; p < dim; ++p) d(p) = random_phase(rng);
    us.push_back(v * d.asDiagonal() * v.adjoint());
  }
  return us;
}

OperatorTuple polynomial_pair_instance(int dim, std::uint64_t seed,
                                       double radius) {
  if (dim < 1)
    throw std::invalid_argument("polynomial_pair_instance: dim must be positive");
  Rng rng(seed);
  CMat a = ginibre(dim, dim, rng);
  a *= radius / op_norm(a);
  CMat b = random_disc(rng) * CMat::Identity(dim, dim) + random_disc(rng) * a +
           random_disc(rng) * (a * a);
  const double nb = op_norm(b);
  if (nb < 1e-12)
    b = (0.5 * radius) * CMat::Identity(dim, dim);
  else
    b *= (0.95 * radius) / nb;
  return make_tuple({a + b, a * b});
}

OperatorTuple gate_pass_instance(int dim, std::uint64_t seed) {
  if (dim < 2)
    throw std::invalid_argument("gate_pass_instance: dim must be at least 2");
  Rng rng(seed);
  const CMat v = random_unitary(dim, rng);
  std::vector<CMat> as;
  as.reserve(3);
  // All slots but the last carry unimodular coordinates, so exactly one
  // direction survives in the final member's defect.
  std::vector<CVec> diags(3, CVec(dim));
  for (int p = 0; p < dim; ++p)
    for (int k = 0; k < 3; ++k)
      diags[static_cast<std::size_t>(k)](p) =
          (p + 1 < dim) ? random_phase(rng) : random_disc(rng, 0.7);
  for (int k = 0; k < 3; ++k)
    as.push_back(v * diags[static_cast<std::size_t>(k)].asDiagonal() *
                 v.adjoint());
  return make_tuple(elementary_symmetric_ops(as));
}

OperatorTuple gate_fail_instance(int dim, std::uint64_t seed,
                                 double min_commutator) {
  if (dim < 2)
    throw std::invalid_argument("gate_fail_instance: dim must be at least 2");
  for (std::uint64_t attempt = 0; attempt < 256; ++attempt) {
    Rng rng(derive_seed(seed, attempt));
    CMat a = ginibre(dim, dim, rng);
    a *= 0.92 / op_norm(a);
    const CMat a2 = a * a;
    const std::vector<CMat> powers = {random_phase(rng) * a,
                                      random_phase(rng) * a2,
                                      random_phase(rng) * (a2 * a)};
    OperatorTuple t = make_tuple(elementary_symmetric_ops(powers));
    FundamentalOperators fo;
    try {
      fo = solve_fundamental(t);
    } catch (const std::exception&) {
      continue;
    }
    if (fo.rank < 2) continue;
    if (commutator_norm(fo.compressed(1), fo.compressed(2)) >= min_commutator)
      return t;
  }
  throw std::runtime_error(
      "gate_fail_instance: no instance found within the attempt budget");
}

std::vector<CMat> commuting_fibre_pair(std::uint64_t seed, int dim) {
  if (dim < 1)
    throw std::invalid_argument("commuting_fibre_pair: dim must be positive");
  Rng rng(seed);
  const CMat w = random_unitary(dim, rng);
  CMat d = CMat::Zero(dim, dim);
  for (int p = 0; p < dim; ++p) d(p, p) = random_disc(rng, 0.8);
  const CMat e1 = w * d * w.adjoint();
  const CMat e2 = random_disc(rng, 0.5) * CMat::Identity(dim, dim) +
                  random_disc(rng, 0.5) * e1 +
                  random_disc(rng, 0.5) * e1 * e1;
  return {e1, e2};
}

std::vector<CMat> clashing_fibre_pair(std::uint64_t seed, int dim) {
  if (dim < 1)
    throw std::invalid_argument("clashing_fibre_pair: dim must be positive");
  Rng rng(seed);
  CMat e1 = ginibre(dim, dim, rng);
  CMat e2 = ginibre(dim, dim, rng);
  e1 *= 0.8 / op_norm(e1);
  e2 *= 0.8 / op_norm(e2);
  return {e1, e2};
}

}  // namespace spd
