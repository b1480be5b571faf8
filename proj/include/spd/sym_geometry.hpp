#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spd/types.hpp"

namespace spd {

// Elementary symmetric polynomials (s_1, ..., s_n) of the coordinates of z,
// computed by expanding prod_k (t + z_k) one factor at a time. s_0 = 1 is
// implicit and not stored.
CVec symmetrize(const CVec& z);

// s_k with the conventions s_0 = 1 and s_k = 0 for k outside [0, n].
Complex sym_coord(const CVec& s, int k);

// Value/partner pair for the two-sided difference functions below. The
// partner is the mirrored row and satisfies partner == -value identically.
struct AntisymPair {
  double value = 0.0;
  double partner = 0.0;
};

// h_{ij}(z) = |s_i(z)|^2 - |s_{m+2+j-i}(z)|^2 for z of length m+1.
// Valid for 1 <= i <= m+1 and i-m-2 <= j <= i-1; throws std::domain_error
// outside that range and std::invalid_argument when z has the wrong length.
AntisymPair h_func(int m_plus_1, int i, int j, const CVec& z);

// Supremum of |h_{ij}| over the open polydisc of dimension m+1. Rows with
// j = 2i-m-2 are identically zero; j = -1 rows carry their own constants,
// all other rows the difference of squared binomials.
double h_bound(int m_plus_1, int i, int j);

// g_{ilj}(z,w) = Re[w(conj(s_i)s_{i-l} - conj(s_q)s_{q-l})] with q = m+2+j-i,
// for z of length m and w in the closed unit disc.
// Valid for 1 <= i <= m, 0 <= l <= i, i+l-m-2 <= j <= i-2.
AntisymPair g_func(int m, int i, int l, int j, const CVec& z, Complex w);

// Supremum of |g_{ilj}| over D^m x D. Rows with j = 2i-m-2 vanish
// identically; j = l-2 rows carry binomial-product constants (with separate
// values at i = l and i = m); all other rows |F(m,i,l,j)|.
double g_bound(int m, int i, int l, int j);

struct EstimateReport {
  int m_plus_1 = 0;
  long long samples = 0;
  std::uint64_t seed = 0;
  long long h_checks = 0;
  long long g_checks = 0;
  long long suppressed = 0;
  std::vector<std::string> violations;
  double max_h_ratio = 0.0;   // worst |h| / bound over rows with bound > 0
  double max_g_ratio = 0.0;
  double zero_row_max = 0.0;  // worst |value| over the identically-zero rows
  // Near-boundary probes at (1 - 10^-k)(1, ..., 1), k = 2..5; entry [k-2]
  // holds the worst ratio to the bound over all rows where the bound is
  // attained in the limit (j != -1 for h, j != l-2 for g, zero rows skipped).
  double h_sharp_min[4] = {1.0, 1.0, 1.0, 1.0};
  double g_sharp_min[4] = {1.0, 1.0, 1.0, 1.0};
  bool ok() const { return violations.empty() && suppressed == 0; }
};

// Samples the open polydisc (rejection sampling per coordinate, fixed seed)
// and checks every valid h row and g row against its bound; a sample may
// exceed a bound by at most tol. Zero rows must stay below 1e-12. Also runs
// the near-boundary sharpness probes. The g rows reuse the first m
// coordinates of each sample as z and the last one as w.
EstimateReport verify_estimates(int m_plus_1, long long samples,
                                std::uint64_t seed, double tol = 1e-10);

enum class Region { Open, Closed, Boundary, Outside };

const char* region_name(Region r);

struct MembershipVerdict {
  Region region = Region::Outside;
  std::vector<double> root_moduli;
  double max_root_mod = 0.0;
  std::string method;
  bool in_closed() const { return region != Region::Outside; }
  bool in_open() const { return region == Region::Open; }
  bool on_boundary() const { return region == Region::Boundary; }
};

// Classifies s through the roots of P(t) = t^n - s_1 t^{n-1} + ... + (-1)^n s_n,
// computed as companion-matrix eigenvalues: Open when every root modulus is
// < 1-tol, Boundary when every modulus is within tol of 1, Closed when every
// modulus is <= 1+tol, Outside otherwise.
MembershipVerdict roots_membership(const CVec& s, double tol = 1e-8);

struct SchurReport {
  CMat l_matrix;
  double min_eig = 0.0;
  bool positive = false;
};

// Schur-Cohn matrix L = q(S)*q(S) - p(S)*p(S) on the n x n upshift S, built
// for the alpha-scaled point (alpha s_1, ..., alpha^n s_n):
//   p(S) = sum_{k=1..n} (-1)^k alpha^k s_k S^{n-k},
//   q(S) = sum_{k=0..n-1} (-1)^k conj(alpha)^k conj(s_k) S^k,  s_0 = 1.
// L is positive definite exactly when every root of the scaled polynomial
// lies in the open disc; positive reports min_eig > tol.
SchurReport schur_membership(const CVec& s, Complex alpha, double tol = 1e-9);

struct CostaraDecomposition {
  CVec c;                   // length n-1
  double residual = 0.0;    // max_i |s_i - c_i - conj(c_{n-i}) s_n|
  bool s_in_gamma = false;  // roots test on s
  bool c_in_gamma = false;  // roots test on c
};

// Unique solution of s_i = c_i + conj(c_{n-i}) s_n when |s_n| < 1:
// c_i = (s_i - conj(s_{n-i}) s_n) / (1 - |s_n|^2). Throws std::domain_error
// when |s_n| >= 1; tol is passed to the membership checks on s and c.
CostaraDecomposition costara_decompose(const CVec& s, double tol = 1e-8);

struct BoundaryReport {
  bool is_boundary = false;
  bool modulus_one = false;        // | |s_n| - 1 | <= tol
  bool conjugate_pairing = false;  // max_i |s_i - conj(s_{n-i}) s_n| <= tol
  bool scaled_in_gamma = false;    // ((n-i)/n s_i)_{i<n} lies in the smaller set
  double pairing_residual = 0.0;
};

// Distinguished-boundary test: |s_n| = 1, s_i = conj(s_{n-i}) s_n for all i,
// and the ((n-i)/n)-scaled truncation is a member one level down.
BoundaryReport bboundary_check(const CVec& s, double tol = 1e-8);

struct PencilValues {
  double phi1 = 0.0;
  double phi2 = 0.0;
};

// The two real pencil values at the scaled triple
// (alpha^i s_i, alpha^{n-i} s_{n-i}, alpha^n s_n), with k = k_const(n, i):
//   phi1 = k^2 (1 - |alpha^n s_n|^2) + |alpha^i s_i|^2 - |alpha^{n-i} s_{n-i}|^2
//          - 2 k Re[alpha^i (s_i - |alpha|^{2(n-i)} conj(s_{n-i}) s_n)]
// and phi2 with the roles of i and n-i exchanged. Nonnegativity of both over
// the closed disc of alpha is necessary for membership of s.
PencilValues scalar_pencils(int i, Complex alpha, const CVec& s);

// Default evaluation grid for the pencils: points_per_circle phases on each
// of the circles |alpha| in {0.25, 0.5, 0.75, 1.0}.
std::vector<Complex> alpha_grid(int points_per_circle = 64);

struct CounterexamplePoint {
  CVec s;
  double s_i_abs = 0.0;
  bool exceeds_n = false;
  MembershipVerdict verdict;
};

// Symmetrization of ((1-eps), ..., (1-eps)) in dimension n, a member of the
// closed set whose i-th coordinate has modulus C(n,i)(1-eps)^i; for small eps
// and 1 < i < n-1 this exceeds n, so coordinate size is not bounded by n.
// Requires n >= 4, 1 < i < n-1, 0 < eps < 1; throws std::domain_error.
CounterexamplePoint counterexample_point(int n, int i, double eps);

}  // namespace spd
