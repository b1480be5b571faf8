#pragma once

#include <vector>

#include "spd/operator_pencils.hpp"
#include "spd/operator_tuple.hpp"
#include "spd/types.hpp"

namespace spd {

// Which defect space the fundamental equations are posed on: Direct solves
// S_i - S_{n-i}* S_n = D E_i D on the defect of S_n, Adjoint solves the same
// equations for the memberwise adjoint tuple, yielding the companion family on
// the defect of S_n*.
enum class Side { Direct, Adjoint };

// Solution of the fundamental equations for one tuple. The operators are
// stored compressed to an orthonormal basis of the defect range; ambient(i)
// lifts entry i back to the full space.
struct FundamentalOperators {
  int n = 0;              // tuple length
  int rank = 0;           // dimension of the defect range
  CMat basis;             // dim x rank, orthonormal columns spanning the range
  CMat defect;            // ambient defect operator of the final member
  std::vector<CMat> e;    // rank x rank solutions, indices 1..n-1
  std::vector<double> residuals;   // ||D (lifted E_i) D - rhs_i|| per index
  std::vector<double> off_defect;  // right-hand-side mass outside the range
  bool within_tol = true;

  const CMat& compressed(int i) const;  // 1-based
  CMat ambient(int i) const;            // basis * E_i * basis^*
};

// Solves the fundamental equations for every index. Throws std::domain_error
// when the final member is not a contraction (solvability needs it) and
// std::invalid_argument for tuples shorter than two.
FundamentalOperators solve_fundamental(const OperatorTuple& t,
                                       Side side = Side::Direct,
                                       double tol = 1e-10);

// Re-solves with a rotated defect basis and with perturbed pseudoinverse
// cutoffs, then aligns the solutions back; the fundamental operators are
// unique, so the deviation is solver noise only.
struct UniquenessReport {
  double max_deviation = 0.0;
  bool pass = true;
};
UniquenessReport uniqueness_check(const OperatorTuple& t, double tol = 1e-9);

// Grid maximum over two independent unimodular phases of
// lambda_max(Re(a x) + Re(b y)), which equals the maximum over |z| = 1 of the
// numerical radius of x + z y. Coarse scan plus local refinement at the
// requested resolution; the result never exceeds the true supremum.
double pair_numerical_radius_max(const CMat& x, const CMat& y,
                                 int fine_grid = 720);

// Numerical-radius bounds w(E_i + z E_{n-i}) <= binom(n, i) on a unimodular
// grid, in both the plain and the adjoint-first arrangement.
struct RadiusReport {
  std::vector<double> bound;    // binom(n, i), indices 1..n-1
  std::vector<double> plain;    // grid max of w(E_i + z E_{n-i})
  std::vector<double> starred;  // grid max of w(E_i* + z E_{n-i})
  double max_excess = 0.0;      // worst value minus its bound
  bool pass = true;
};
RadiusReport radius_bound_check(const FundamentalOperators& fo, int n,
                                int grid = 720, double tol = 1e-8);

// Four equivalent commutation statements for a self-indexed family
// A_1..A_{n-1} on one space, evaluated on a unimodular grid:
//   (1) the A_i commute and [A_i, A_{n-j}*] = [A_j, A_{n-i}*],
//   (2) the pencils A_i* + A_{n-i} z commute pairwise,
//   (3) each pencil A_i* + A_{n-i} z is normal,
//   (4) each swapped pencil A_{n-i}* + A_i z is normal.
// agree records whether the four verdicts coincide, which the equivalence
// predicts for every input.
struct Lemma43Report {
  std::vector<CheckItem> items;  // the four conditions, in order
  bool agree = true;
};
Lemma43Report lemma43_check(const std::vector<CMat>& a, int grid = 64,
                            double tol = 1e-10);

// Interlacing identities between a tuple and its two fundamental families:
// defect intertwining, defect recursions on both sides, the gated pair
// difference formulas, and the mixed numerical-radius bounds.
struct Lemma72Report {
  std::vector<CheckItem> items;
  int gated_pairs_direct = 0;   // pairs admitted to the direct difference law
  int gated_pairs_adjoint = 0;  // same for the adjoint family
  int total_pairs = 0;
  bool pass = true;
};
Lemma72Report lemma72_suite(const OperatorTuple& t,
                            const FundamentalOperators& e,
                            const FundamentalOperators& f, double tol = 1e-9);

// Commutation conditions a fundamental family inherits when the adjoint tuple
// admits an isometric lift: [E_i, E_j] = 0 and
// [E_i, E_{n-j}*] = [E_j, E_{n-i}*].
struct CommutationGates {
  double commutator_family = 0.0;  // max ||[E_i, E_j]||
  double mixed_family = 0.0;       // max ||[E_i, E_{n-j}*] - [E_j, E_{n-i}*]||
  bool pass = true;
};
CommutationGates prop66_conditions(const FundamentalOperators& fo,
                                   double tol = 1e-9);

// Conjugating the tuple by a unitary W conjugates each fundamental operator by
// the induced defect-basis unitary. Solves both sides independently and
// compares after alignment.
struct InvarianceReport {
  double max_deviation = 0.0;
  double alignment_unitarity = 0.0;  // ||V*V - I|| for the induced map
  bool pass = true;
};
InvarianceReport unitary_equivalence_invariance(const OperatorTuple& t,
                                                const CMat& w,
                                                double tol = 1e-9);

}  // namespace spd
