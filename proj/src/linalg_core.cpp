#include "spd/linalg_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "spd/operator_tuple.hpp"
#include "spd/rng.hpp"

namespace spd {

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Complex random_phase(Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double theta = 2.0 * std::numbers::pi * unif(rng);
  return {std::cos(theta), std::sin(theta)};
}

Complex random_disc(Rng& rng, double radius) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (;;) {
    const double x = unif(rng);
    const double y = unif(rng);
    if (x * x + y * y < 1.0) return radius * Complex(x, y);
  }
}

CMat ginibre(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMat g(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) g(r, c) = Complex(gauss(rng), gauss(rng));
  return g;
}

CMat random_unitary(int dim, Rng& rng) {
  const CMat g = ginibre(dim, dim, rng);
  Eigen::HouseholderQR<CMat> qr(g);
  CMat q = qr.householderQ();
  const CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < dim; ++k) {
    const Complex d = r(k, k);
    const double mod = std::abs(d);
    q.col(k) *= (mod > 0) ? d / mod : Complex(1.0, 0.0);
  }
  return q;
}

double op_norm(const CMat& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMat> svd(a);
  return svd.singularValues()(0);
}

double herm_deviation(const CMat& a) { return op_norm(a - a.adjoint()); }

double commutator_norm(const CMat& a, const CMat& b) { return op_norm(a * b - b * a); }

bool commute_check(const CMat& a, const CMat& b, double tol) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
    throw std::invalid_argument("commute_check: matrices must be square and same size");
  if (tol < 0) tol = kCommuteTolFactor * static_cast<double>(a.rows());
  return commutator_norm(a, b) <= tol;
}

PsdReport psd_check(const CMat& a, double tol) {
  const double hdev = herm_deviation(a);
  const CMat h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(h, Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  return {hdev <= tol && min_eig >= -tol, min_eig, hdev};
}

CMat psd_sqrt(const CMat& a) {
  const CMat h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(h);
  Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
}

DefectPair defect_pair(const CMat& t, double rank_tol) {
  const int dim = static_cast<int>(t.rows());
  const CMat h = CMat::Identity(dim, dim) - t.adjoint() * t;
  const CMat hh = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(hh);
  const Eigen::VectorXd lam = es.eigenvalues();
  const double lam_max = std::max(lam.maxCoeff(), 0.0);
  if (rank_tol < 0)
    rank_tol = std::max(1e-20 * lam_max, 1e-14 * static_cast<double>(dim));

  Eigen::VectorXd clamped = lam.cwiseMax(0.0);
  for (int k = 0; k < dim; ++k)
    if (lam(k) <= rank_tol) clamped(k) = 0.0;
  CMat defect = es.eigenvectors() * clamped.cwiseSqrt().asDiagonal() *
                es.eigenvectors().adjoint();

  int rank = 0;
  for (int k = 0; k < dim; ++k)
    if (lam(k) > rank_tol) ++rank;
  CMat basis(dim, rank);
  int col = 0;
  for (int k = 0; k < dim; ++k)
    if (lam(k) > rank_tol) basis.col(col++) = es.eigenvectors().col(k);
  return {std::move(defect), std::move(basis), rank, lam.minCoeff()};
}

CMat pseudoinverse(const CMat& a, double rtol) {
  Eigen::JacobiSVD<CMat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd sv = svd.singularValues();
  const double cutoff = (sv.size() > 0) ? rtol * sv(0) : 0.0;
  Eigen::VectorXd inv = sv;
  for (int k = 0; k < sv.size(); ++k) inv(k) = (sv(k) > cutoff && sv(k) > 0) ? 1.0 / sv(k) : 0.0;
  return svd.matrixV() * inv.asDiagonal().toDenseMatrix().cast<Complex>() *
         svd.matrixU().adjoint();
}

double numerical_radius(const CMat& a, int grid) {
  if (a.rows() != a.cols()) throw std::invalid_argument("numerical_radius: square matrix required");
  if (grid < 1) throw std::invalid_argument("numerical_radius: grid must be positive");
  const CMat adj = a.adjoint();
  double best = 0.0;
  for (int k = 0; k < grid; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / grid;
    const Complex phase(std::cos(theta), std::sin(theta));
    const CMat h = 0.5 * (phase * a + std::conj(phase) * adj);
    Eigen::SelfAdjointEigenSolver<CMat> es(h, Eigen::EigenvaluesOnly);
    best = std::max(best, es.eigenvalues().maxCoeff());
  }
  return best;
}

double spectral_radius(const CMat& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("spectral_radius: square matrix required");
  if (a.size() == 0) return 0.0;
  Eigen::ComplexEigenSolver<CMat> es(a, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

JointEigs joint_eigenvalues(const std::vector<CMat>& as, std::uint64_t seed, double tol) {
  if (as.empty()) throw std::invalid_argument("joint_eigenvalues: empty family");
  const int dim = static_cast<int>(as[0].rows());
  const int n = static_cast<int>(as.size());
  double scale = 0.0;
  for (const CMat& a : as) {
    if (a.rows() != dim || a.cols() != dim)
      throw std::invalid_argument("joint_eigenvalues: family must share a square dimension");
    scale = std::max(scale, a.cwiseAbs().maxCoeff());
  }
  if (scale == 0.0) scale = 1.0;

  Rng rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  constexpr int kMaxAttempts = 24;

  CMat best_tuples(dim, n);
  double best_res = std::numeric_limits<double>::infinity();
  int attempt = 0;
  for (; attempt < kMaxAttempts; ++attempt) {
    CMat comb = CMat::Zero(dim, dim);
    for (const CMat& a : as) comb += Complex(gauss(rng), gauss(rng)) * a;
    Eigen::ComplexSchur<CMat> schur(comb);
    if (schur.info() != Eigen::Success) continue;
    const CMat& u = schur.matrixU();

    CMat tuples(dim, n);
    double res = 0.0;
    for (int j = 0; j < n; ++j) {
      const CMat tj = u.adjoint() * as[static_cast<std::size_t>(j)] * u;
      for (int p = 0; p < dim; ++p) tuples(p, j) = tj(p, p);
      for (int p = 1; p < dim; ++p)
        for (int q = 0; q < p; ++q) res = std::max(res, std::abs(tj(p, q)));
    }
    res /= scale;
    if (res < best_res) {
      best_res = res;
      best_tuples = tuples;
    }
    if (res <= tol) {
      ++attempt;
      break;
    }
    // Otherwise the combination's eigenvalues were too clustered to separate
    // the family (or the family does not commute); a fresh combination is
    // drawn on the next pass and the best result so far is retained.
  }
  return {std::move(best_tuples), best_res, attempt};
}

OperatorTuple make_tuple(std::vector<CMat> ops) {
  if (ops.empty()) throw std::invalid_argument("make_tuple: empty tuple");
  const Eigen::Index dim = ops.front().rows();
  for (const CMat& a : ops)
    if (a.rows() != dim || a.cols() != dim)
      throw std::invalid_argument("make_tuple: members must be square with a common dimension");
  return {std::move(ops)};
}

CommuteReport commute_check(const OperatorTuple& t, double tol) {
  if (tol < 0) tol = kCommuteTolFactor * static_cast<double>(t.dim());
  CommuteReport rep;
  for (std::size_t a = 0; a + 1 < t.ops.size(); ++a)
    for (std::size_t b = a + 1; b < t.ops.size(); ++b)
      rep.max_commutator = std::max(rep.max_commutator, commutator_norm(t.ops[a], t.ops[b]));
  rep.ok = rep.max_commutator <= tol;
  return rep;
}

void require_commuting(const OperatorTuple& t, double tol, const char* who) {
  const CommuteReport rep = commute_check(t, tol);
  if (!rep.ok)
    throw std::invalid_argument(std::string(who) + ": tuple members do not commute");
}

std::vector<CMat> elementary_symmetric_ops(const std::vector<CMat>& as) {
  if (as.empty()) throw std::invalid_argument("elementary_symmetric_ops: empty family");
  const Eigen::Index dim = as.front().rows();
  for (const CMat& a : as)
    if (a.rows() != dim || a.cols() != dim)
      throw std::invalid_argument("elementary_symmetric_ops: family must share a square dimension");
  // coeff[k] tracks e_k of the factors consumed so far.
  std::vector<CMat> coeff;
  coeff.push_back(CMat::Identity(dim, dim));
  for (const CMat& a : as) {
    coeff.push_back(CMat::Zero(dim, dim));
    for (std::size_t k = coeff.size() - 1; k >= 1; --k) coeff[k] += coeff[k - 1] * a;
  }
  coeff.erase(coeff.begin());
  return coeff;
}

OperatorTuple conjugate_tuple(const OperatorTuple& t, const CMat& w) {
  if (w.rows() != t.dim() || w.cols() != t.dim())
    throw std::invalid_argument("conjugate_tuple: conjugator dimension mismatch");
  OperatorTuple out;
  out.ops.reserve(t.ops.size());
  for (const CMat& a : t.ops) out.ops.push_back(w.adjoint() * a * w);
  return out;
}

OperatorTuple adjoint_tuple(const OperatorTuple& t) {
  OperatorTuple out;
  out.ops.reserve(t.ops.size());
  for (const CMat& a : t.ops) out.ops.push_back(a.adjoint());
  return out;
}

}  // namespace spd
