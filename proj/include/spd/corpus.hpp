#pragma once

#include <cstdint>
#include <vector>

#include "spd/operator_tuple.hpp"
#include "spd/types.hpp"

namespace spd {

// Deterministic instance generators used by tests, the acceptance harness and
// the CLI self-check. Every generator is a pure function of its arguments, so
// a (kind, seed) pair names a reproducible operator tuple.

// Symmetrization of n commuting normal contractions that share one Haar-random
// eigenbasis; the joint spectrum sits strictly inside the polydisc of the
// given radius.
OperatorTuple normal_symmetrization_instance(int n, int dim, std::uint64_t seed,
                                             double radius = 0.9);

// Commuting unitaries with a shared Haar-random eigenbasis and independent
// uniform eigenvalue phases.
std::vector<CMat> commuting_unitary_family(int n, int dim, std::uint64_t seed);

// Pair instance (n = 2): one nonnormal random contraction A together with a
// rescaled random quadratic polynomial in A. Commuting contractions always
// dilate jointly, so the symmetrized pair is admissible while its fundamental
// operator is a full (generically nonnormal) block.
OperatorTuple polynomial_pair_instance(int dim, std::uint64_t seed,
                                       double radius = 0.9);

// Triple instance (n = 3) whose final member has a rank-one defect: all but
// one shared eigenbasis slot carries unimodular coordinates. The fundamental
// operators are then scalars, so every commutation gate holds trivially.
OperatorTuple gate_pass_instance(int dim, std::uint64_t seed);

// Triple instance (n = 3) built from scaled powers (c1 A, c2 A^2, c3 A^3) of a
// single nonnormal contraction A. Such a tuple dilates through the matching
// powers of A's unitary dilation, so the symmetrization is admissible, yet the
// solved fundamental operators generically fail to commute. Seeds are scanned
// until the leading commutator is at least min_commutator.
OperatorTuple gate_fail_instance(int dim, std::uint64_t seed,
                                 double min_commutator = 1e-3);

// Multiplier-symbol pair (E1, E2): a random normal matrix together with a
// complex quadratic polynomial in it. Both symbols are normal and commute, so
// the pair satisfies every fibre condition of the multiplier model.
std::vector<CMat> commuting_fibre_pair(std::uint64_t seed, int dim = 2);

// Independent nonnormal contractions; the fibre conditions fail generically.
std::vector<CMat> clashing_fibre_pair(std::uint64_t seed, int dim = 2);

}  // namespace spd
