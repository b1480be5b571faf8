#pragma once

#include <vector>

#include "spd/types.hpp"

namespace spd {

// A commuting tuple (S_1, ..., S_n) of square matrices on a common space.
// Commutativity is a soft invariant checked by commute_check; construction
// only enforces shape.
struct OperatorTuple {
  std::vector<CMat> ops;  // S_1, ..., S_n in order

  int n() const { return static_cast<int>(ops.size()); }
  Eigen::Index dim() const { return ops.empty() ? 0 : ops.front().rows(); }
  // 1-based access matching the subscripts S_i.
  const CMat& op(int i) const { return ops.at(static_cast<std::size_t>(i) - 1); }
  CMat& op(int i) { return ops.at(static_cast<std::size_t>(i) - 1); }
};

// Validates shape and throws std::invalid_argument on ragged dimensions.
OperatorTuple make_tuple(std::vector<CMat> ops);

struct CommuteReport {
  double max_commutator = 0.0;
  bool ok = true;
};

// Worst pairwise commutator norm over the tuple. Negative tol selects the
// default 1e-10 * dim.
CommuteReport commute_check(const OperatorTuple& t, double tol = -1.0);

// Guard used by operations whose contracts assume commutativity; throws
// std::invalid_argument naming the caller when the check fails.
void require_commuting(const OperatorTuple& t, double tol = -1.0,
                       const char* who = "operator tuple");

// Elementary symmetric sums e_1(A), ..., e_n(A) of commuting matrices,
// computed by the same product expansion as the scalar symmetrize.
std::vector<CMat> elementary_symmetric_ops(const std::vector<CMat>& as);

// Conjugates every member by the same unitary: S_i -> W* S_i W.
OperatorTuple conjugate_tuple(const OperatorTuple& t, const CMat& w);

// Memberwise adjoint (S_1*, ..., S_n*).
OperatorTuple adjoint_tuple(const OperatorTuple& t);

}  // namespace spd
