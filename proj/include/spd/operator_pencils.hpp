#pragma once

#include <string>
#include <vector>

#include "spd/operator_tuple.hpp"
#include "spd/types.hpp"

namespace spd {

// Hermitian pencil pair attached to a commuting tuple at index i and scale
// alpha. With k = k(i) = C(n-1,i) + C(n-1,n-i) and M = k alpha^i (S_i -
// |alpha|^{2(n-i)} S_{n-i}* S_n):
//
//   Phi_1 = k^2 (I - |alpha|^{2n} S_n* S_n)
//           + |alpha|^{2i} S_i* S_i - |alpha|^{2(n-i)} S_{n-i}* S_{n-i}
//           - M - M*
//
// and Phi_2 swaps i with n-i. Both are differences of Gram matrices:
//   Phi_1 = |k - alpha^i S_i|^2 - |k alpha^n S_n - alpha^{n-i} S_{n-i}|^2
// with |X|^2 = X*X, which pins the adjoint placement in the cross terms.
struct PencilEvaluation {
  int i = 0;
  Complex alpha;
  CMat phi1;
  CMat phi2;
  double min_eig1 = 0.0;
  double min_eig2 = 0.0;
  double herm_dev = 0.0;  // worst deviation of the raw assembly from Hermitian
};

PencilEvaluation op_pencil(int i, Complex alpha, const OperatorTuple& t);

// Uniformly spaced points on the unit circle.
std::vector<Complex> beta_grid(int points = 128);

// One named residual with its own tolerance.
struct CheckItem {
  std::string name;
  double residual = 0.0;
  double tol = 0.0;
  bool pass = true;
};

struct SuiteReport {
  std::vector<CheckItem> checks;
  double min_pencil_eig = 0.0;
  double max_commutator = 0.0;
  bool pass = true;
  // The suite tests necessary conditions only: a pass does not certify
  // membership, and the verdict string says which reading applies.
  std::string note;
};

// Necessary conditions for (S_1, ..., S_n) to be a commuting contraction
// tuple associated with the closed domain:
//   (a) ||S_i|| <= k(i) + tol and ||S_n|| <= 1 + tol,
//   (b) both pencils are PSD within tol at every grid alpha and every i,
//   (c) every joint eigenvalue tuple lies in the closed domain.
SuiteReport necessary_contraction_suite(const OperatorTuple& t,
                                        const std::vector<Complex>& alphas,
                                        double tol = 1e-10);

// Elementary symmetric sums of commuting unitaries. Validates unitarity and
// commutativity of the inputs (throws std::invalid_argument otherwise).
OperatorTuple gamma_unitary_from_unitaries(const std::vector<CMat>& us,
                                           double tol = 1e-10);

enum class TupleClass {
  GammaUnitary,
  GammaIsometry,
  PureGammaIsometry,
  GammaCoisometry,
  NecessaryPass,
  Fail,
};

const char* tuple_class_name(TupleClass c);

struct ClassifierVerdict {
  TupleClass cls = TupleClass::Fail;
  std::vector<CheckItem> evidence;
  // "certified ..." when the evidence is conclusive for the class,
  // "not refuted ..." when only necessary conditions were checkable.
  std::string note;
};

// Unitary-class test: S_n unitary, each S_i normal, S_i = S_{n-i}* S_n, and
// the ((n-i)/n)-scaled truncation passes the necessary suite with its joint
// eigenvalues inside the (n-1)-domain. For commuting normal tuples the joint
// eigenvalue test is conclusive, so a pass is a certificate.
ClassifierVerdict classify_unitary(const OperatorTuple& t, double tol = 1e-10);

// Isometry-class test. Primary criterion: S_n isometric, S_i = S_{n-i}* S_n,
// scaled truncation passes the necessary suite. Corroborating evidence:
// vanishing of both pencils on the unit circle, and (when r(S_i) < k(i) for
// every i) isometry of the two Moebius-type quotients
//   (k b^n S_n - b^{n-i} S_{n-i})(k I - b^i S_i)^{-1},
//   (k b^n S_n - b^i S_i)(k I - b^{n-i} S_{n-i})^{-1}
// over the beta grid; these are exactly the Gram factors of the vanishing
// pencils, so each quotient has modulus-one symbol on the circle.
// On a finite-dimensional space an isometric S_n is
// unitary, so a tuple passing the unitary classifier is reported as such.
ClassifierVerdict classify_isometry(const OperatorTuple& t, double tol = 1e-10);

// Composite classification: unitary first, then isometry (with its
// escalation), then co-isometry via the adjoint tuple, then the necessary
// suite alone. Evidence comes from the stage that decided.
ClassifierVerdict classify_tuple(const OperatorTuple& t, double tol = 1e-10);

struct ImplicationReport {
  bool triggered = false;
  bool pass = true;  // vacuously true when not triggered
  std::vector<CheckItem> checks;
};

// If the tuple passes the necessary suite and S_n is an isometry, the
// algebraic identities of the isometry class must follow:
//   S_i = S_{n-i}* S_n,  S_{n-i} = S_i* S_n,  S_i* S_i = S_{n-i}* S_{n-i}.
// Reports their residuals; vacuous when the hypothesis fails.
ImplicationReport isometry_implies_contraction_check(const OperatorTuple& t,
                                                     double tol = 1e-10);

}  // namespace spd
