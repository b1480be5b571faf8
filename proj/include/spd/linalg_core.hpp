#pragma once

#include <cstdint>
#include <vector>

#include "spd/types.hpp"

namespace spd {

// Largest singular value.
double op_norm(const CMat& a);

// ||A - A*|| in operator norm.
double herm_deviation(const CMat& a);

double commutator_norm(const CMat& a, const CMat& b);

// tol < 0 selects the default 1e-10 * dim.
bool commute_check(const CMat& a, const CMat& b, double tol = -1.0);

struct PsdReport {
  bool ok;
  double min_eig;
  double herm_dev;
};

// Positive semidefiniteness within tol: Hermitian deviation and the smallest
// eigenvalue of the Hermitian part must both clear the tolerance.
PsdReport psd_check(const CMat& a, double tol = kPsdTol);

// Square root of a Hermitian PSD matrix; eigenvalues below zero (roundoff)
// are clamped before taking the root.
CMat psd_sqrt(const CMat& a);

struct DefectPair {
  CMat defect;  // D_T = (I - T*T)^{1/2}
  CMat basis;   // orthonormal columns spanning range(D_T)
  int rank;
  double min_eig_before_clamp;  // smallest eigenvalue of I - T*T
};

// Defect operator of a contraction together with an orthonormal basis of its
// range. Directions whose defect eigenvalue sits below the double-precision
// noise floor of I - T*T are treated as zero; rank_tol < 0 selects
// max(1e-20 * lambda_max, dim * 1e-14) on the eigenvalues of I - T*T
// (i.e. 1e-10 * sigma_max relative in singular-value terms plus the floor).
DefectPair defect_pair(const CMat& t, double rank_tol = -1.0);

// Moore-Penrose pseudoinverse; singular values below rtol * sigma_max are
// treated as zero.
CMat pseudoinverse(const CMat& a, double rtol = kRankTolFactor);

// max over the theta grid of lambda_max((e^{i theta} A + e^{-i theta} A*)/2).
// A grid maximum never overshoots the true numerical radius.
double numerical_radius(const CMat& a, int grid = 720);

// Largest eigenvalue modulus.
double spectral_radius(const CMat& a);

struct JointEigs {
  CMat tuples;  // dim x n; row k holds the k-th joint eigenvalue tuple
  double triangular_residual;  // largest below-diagonal magnitude, relative
  int attempts;
};

// Joint eigenvalue tuples of a commuting family: Schur vectors of a random
// linear combination triangularize every member; retried with a fresh
// combination when the combination has clustered eigenvalues or the family
// fails to triangularize.
JointEigs joint_eigenvalues(const std::vector<CMat>& as, std::uint64_t seed,
                            double tol = 1e-8);

}  // namespace spd
