#include "spd/sym_geometry.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "spd/combinatorics.hpp"
#include "spd/linalg_core.hpp"
#include "spd/rng.hpp"

namespace spd {

namespace {

constexpr double kZeroRowTol = 1e-12;

double sq_diff(std::int64_t a, std::int64_t b) {
  const int128 d = int128(a) * a - int128(b) * b;
  return std::abs(static_cast<double>(d));
}

double prod_diff(std::int64_t a, std::int64_t b, std::int64_t c,
                 std::int64_t d) {
  const int128 e = int128(a) * b - int128(c) * d;
  return std::abs(static_cast<double>(e));
}

// h in terms of a precomputed s-vector of length m+1.
double h_from_s(const CVec& s, int m_plus_1, int i, int j) {
  const int q = m_plus_1 + 1 + j - i;  // m + 2 + j - i
  return std::norm(sym_coord(s, i)) - std::norm(sym_coord(s, q));
}

Complex g_inner(const CVec& s, int m, int i, int l, int j) {
  const int q = m + 2 + j - i;
  return std::conj(sym_coord(s, i)) * sym_coord(s, i - l) -
         std::conj(sym_coord(s, q)) * sym_coord(s, q - l);
}

void require_h_domain(int m_plus_1, int i, int j) {
  const int m = m_plus_1 - 1;
  if (m_plus_1 < 1) throw std::domain_error("h_func: need m+1 >= 1");
  if (i < 1 || i > m_plus_1 || j < i - m - 2 || j > i - 1)
    throw std::domain_error("h_func: index out of range");
}

void require_g_domain(int m, int i, int l, int j) {
  if (m < 1) throw std::domain_error("g_func: need m >= 1");
  if (i < 1 || i > m || l < 0 || l > i || j < i + l - m - 2 || j > i - 2)
    throw std::domain_error("g_func: index out of range");
}

struct RowSink {
  std::vector<std::string>* out;
  long long* suppressed;
  static constexpr std::size_t kCap = 200;
  void add(const char* kind, int dim, int i, int l, int j, long long sample,
           double value, double bound) {
    if (out->size() >= kCap) {
      ++*suppressed;
      return;
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "%s dim=%d i=%d l=%d j=%d sample=%lld value=%.6e bound=%.6e",
                  kind, dim, i, l, j, sample, value, bound);
    out->push_back(buf);
  }
};

}  // namespace

CVec symmetrize(const CVec& z) {
  const int n = static_cast<int>(z.size());
  std::vector<Complex> coeff(static_cast<std::size_t>(n) + 1,
                             Complex(0.0, 0.0));
  coeff[0] = Complex(1.0, 0.0);
  for (int k = 0; k < n; ++k) {
    for (int d = k + 1; d >= 1; --d) coeff[d] += z[k] * coeff[d - 1];
  }
  CVec s(n);
  for (int d = 1; d <= n; ++d) s[d - 1] = coeff[d];
  return s;
}

Complex sym_coord(const CVec& s, int k) {
  if (k == 0) return Complex(1.0, 0.0);
  if (k < 0 || k > s.size()) return Complex(0.0, 0.0);
  return s[k - 1];
}

AntisymPair h_func(int m_plus_1, int i, int j, const CVec& z) {
  require_h_domain(m_plus_1, i, j);
  if (z.size() != m_plus_1)
    throw std::invalid_argument("h_func: z has wrong length");
  const CVec s = symmetrize(z);
  AntisymPair out;
  out.value = h_from_s(s, m_plus_1, i, j);
  const int q = m_plus_1 + 1 + j - i;
  out.partner = std::norm(sym_coord(s, q)) - std::norm(sym_coord(s, i));
  return out;
}

double h_bound(int m_plus_1, int i, int j) {
  require_h_domain(m_plus_1, i, j);
  const int m = m_plus_1 - 1;
  if (j == 2 * i - m - 2) return 0.0;
  if (j == -1) {
    if (i == m_plus_1) return 1.0;
    return sq_diff(binom(m_plus_1, m - i), binom(m_plus_1, i - 1));
  }
  return sq_diff(binom(m_plus_1, i), binom(m_plus_1, m + 2 + j - i));
}

AntisymPair g_func(int m, int i, int l, int j, const CVec& z, Complex w) {
  require_g_domain(m, i, l, j);
  if (z.size() != m) throw std::invalid_argument("g_func: z has wrong length");
  const CVec s = symmetrize(z);
  const Complex inner = g_inner(s, m, i, l, j);
  AntisymPair out;
  out.value = std::real(w * inner);
  out.partner = std::real(w * (-inner));
  return out;
}

double g_bound(int m, int i, int l, int j) {
  require_g_domain(m, i, l, j);
  if (j == 2 * i - m - 2) return 0.0;
  if (j == l - 2) {
    if (i == l) return static_cast<double>(binom(m, i));
    if (i == m) return static_cast<double>(binom(m, l));
    return prod_diff(binom(m, m - 1 - i), binom(m, m - 1 - i + l),
                     binom(m, i - 1), binom(m, i - 1 - l));
  }
  return std::abs(static_cast<double>(F_val(m, i, l, j)));
}

EstimateReport verify_estimates(int m_plus_1, long long samples,
                                std::uint64_t seed, double tol) {
  if (m_plus_1 < 2)
    throw std::domain_error("verify_estimates: need m+1 >= 2");
  const int big_n = m_plus_1;
  const int m = big_n - 1;

  struct HRow {
    int i, j;
    double bound;
    bool zero_row;
    bool sharp;  // participates in the near-boundary probe
  };
  struct GRow {
    int i, l, j;
    double bound;
    bool zero_row;
    bool sharp;
  };
  std::vector<HRow> h_rows;
  for (int i = 1; i <= big_n; ++i)
    for (int j = i - m - 2; j <= i - 1; ++j) {
      const bool zero = (j == 2 * i - m - 2);
      h_rows.push_back({i, j, h_bound(big_n, i, j), zero,
                        !zero && j != -1});
    }
  std::vector<GRow> g_rows;
  for (int i = 1; i <= m; ++i)
    for (int l = 0; l <= i; ++l)
      for (int j = i + l - m - 2; j <= i - 2; ++j) {
        const bool zero = (j == 2 * i - m - 2);
        g_rows.push_back({i, l, j, g_bound(m, i, l, j), zero,
                          !zero && j != l - 2});
      }

  EstimateReport rep;
  rep.m_plus_1 = big_n;
  rep.samples = samples;
  rep.seed = seed;
  RowSink sink{&rep.violations, &rep.suppressed};

  Rng rng(seed);
  CVec z(big_n);
  for (long long t = 0; t < samples; ++t) {
    for (int k = 0; k < big_n; ++k) z[k] = random_disc(rng);
    const CVec s_full = symmetrize(z);
    const CVec s_head = symmetrize(z.head(m));
    const Complex w = z[m];

    for (const HRow& row : h_rows) {
      const double v = std::abs(h_from_s(s_full, big_n, row.i, row.j));
      ++rep.h_checks;
      if (row.zero_row) {
        rep.zero_row_max = std::max(rep.zero_row_max, v);
        if (v > kZeroRowTol)
          sink.add("h-zero", big_n, row.i, 0, row.j, t, v, 0.0);
        continue;
      }
      rep.max_h_ratio = std::max(rep.max_h_ratio, v / row.bound);
      if (v > row.bound + tol)
        sink.add("h", big_n, row.i, 0, row.j, t, v, row.bound);
    }
    for (const GRow& row : g_rows) {
      const double v =
          std::abs(std::real(w * g_inner(s_head, m, row.i, row.l, row.j)));
      ++rep.g_checks;
      if (row.zero_row) {
        rep.zero_row_max = std::max(rep.zero_row_max, v);
        if (v > kZeroRowTol)
          sink.add("g-zero", m, row.i, row.l, row.j, t, v, 0.0);
        continue;
      }
      rep.max_g_ratio = std::max(rep.max_g_ratio, v / row.bound);
      if (v > row.bound + tol)
        sink.add("g", m, row.i, row.l, row.j, t, v, row.bound);
    }
  }

  for (int k = 2; k <= 5; ++k) {
    const double r = 1.0 - std::pow(10.0, -k);
    const CVec zb = CVec::Constant(big_n, Complex(r, 0.0));
    const CVec sb_full = symmetrize(zb);
    const CVec sb_head = symmetrize(zb.head(m));
    double h_min = 1.0;
    for (const HRow& row : h_rows) {
      if (!row.sharp) continue;
      h_min = std::min(
          h_min, std::abs(h_from_s(sb_full, big_n, row.i, row.j)) / row.bound);
    }
    double g_min = 1.0;
    for (const GRow& row : g_rows) {
      if (!row.sharp) continue;
      const Complex inner = g_inner(sb_head, m, row.i, row.l, row.j);
      if (std::abs(inner) == 0.0) {
        g_min = 0.0;
        continue;
      }
      // w of modulus just under 1 aligned against the inner product phase.
      const Complex w = (1.0 - 1e-12) * std::conj(inner) / std::abs(inner);
      g_min = std::min(g_min, std::real(w * inner) / row.bound);
    }
    rep.h_sharp_min[k - 2] = h_min;
    rep.g_sharp_min[k - 2] = g_min;
  }
  return rep;
}

const char* region_name(Region r) {
  switch (r) {
    case Region::Open: return "open";
    case Region::Closed: return "closed";
    case Region::Boundary: return "boundary";
    case Region::Outside: return "outside";
  }
  return "?";
}

MembershipVerdict roots_membership(const CVec& s, double tol) {
  const int n = static_cast<int>(s.size());
  if (n < 1) throw std::invalid_argument("roots_membership: empty point");
  MembershipVerdict v;
  v.method = "roots";
  // Companion matrix of t^n + sum_k (-1)^k s_k t^{n-k}: ones on the
  // subdiagonal, the negated coefficients in the last column.
  CMat c = CMat::Zero(n, n);
  for (int r = 1; r < n; ++r) c(r, r - 1) = 1.0;
  for (int k = 1; k <= n; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    c(n - k, n - 1) = -sign * s[k - 1];  // row n-k holds -coeff of t^{n-k}
  }
  Eigen::ComplexEigenSolver<CMat> es(c, false);
  v.root_moduli.resize(n);
  for (int k = 0; k < n; ++k) v.root_moduli[k] = std::abs(es.eigenvalues()[k]);
  std::sort(v.root_moduli.begin(), v.root_moduli.end());
  v.max_root_mod = v.root_moduli.back();
  const double lo = *std::min_element(v.root_moduli.begin(),
                                      v.root_moduli.end());
  if (lo >= 1.0 - tol && v.max_root_mod <= 1.0 + tol)
    v.region = Region::Boundary;
  else if (v.max_root_mod < 1.0 - tol)
    v.region = Region::Open;
  else if (v.max_root_mod <= 1.0 + tol)
    v.region = Region::Closed;
  else
    v.region = Region::Outside;
  return v;
}

SchurReport schur_membership(const CVec& s, Complex alpha, double tol) {
  const int n = static_cast<int>(s.size());
  if (n < 1) throw std::invalid_argument("schur_membership: empty point");
  CMat shift = CMat::Zero(n, n);
  for (int r = 0; r + 1 < n; ++r) shift(r, r + 1) = 1.0;

  std::vector<CMat> powers(n + 1);
  powers[0] = CMat::Identity(n, n);
  for (int k = 1; k <= n; ++k) powers[k] = powers[k - 1] * shift;

  CMat p = CMat::Zero(n, n);
  Complex ak(1.0, 0.0);
  for (int k = 1; k <= n; ++k) {
    ak *= alpha;
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    p += sign * ak * s[k - 1] * powers[n - k];
  }
  CMat q = powers[0];
  Complex abar(1.0, 0.0);
  for (int k = 1; k <= n - 1; ++k) {
    abar *= std::conj(alpha);
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    q += sign * abar * std::conj(s[k - 1]) * powers[k];
  }

  SchurReport rep;
  rep.l_matrix = q.adjoint() * q - p.adjoint() * p;
  const CMat herm = 0.5 * (rep.l_matrix + rep.l_matrix.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(herm, Eigen::EigenvaluesOnly);
  rep.min_eig = es.eigenvalues().minCoeff();
  rep.positive = rep.min_eig > tol;
  return rep;
}

CostaraDecomposition costara_decompose(const CVec& s, double tol) {
  const int n = static_cast<int>(s.size());
  if (n < 2) throw std::invalid_argument("costara_decompose: need n >= 2");
  const Complex sn = s[n - 1];
  const double denom = 1.0 - std::norm(sn);
  if (denom <= 0.0)
    throw std::domain_error("costara_decompose: |s_n| >= 1");
  CostaraDecomposition out;
  out.c = CVec(n - 1);
  for (int i = 1; i <= n - 1; ++i)
    out.c[i - 1] = (s[i - 1] - std::conj(s[n - i - 1]) * sn) / denom;
  for (int i = 1; i <= n - 1; ++i) {
    const Complex back = out.c[i - 1] + std::conj(out.c[n - i - 1]) * sn;
    out.residual = std::max(out.residual, std::abs(s[i - 1] - back));
  }
  out.s_in_gamma = roots_membership(s, tol).in_closed();
  out.c_in_gamma =
      (n == 2) ? (std::abs(out.c[0]) <= 1.0 + tol)
               : roots_membership(out.c, tol).in_closed();
  return out;
}

BoundaryReport bboundary_check(const CVec& s, double tol) {
  const int n = static_cast<int>(s.size());
  if (n < 1) throw std::invalid_argument("bboundary_check: empty point");
  BoundaryReport rep;
  const Complex sn = s[n - 1];
  rep.modulus_one = std::abs(std::abs(sn) - 1.0) <= tol;
  for (int i = 1; i <= n - 1; ++i) {
    const double dev = std::abs(s[i - 1] - std::conj(s[n - i - 1]) * sn);
    rep.pairing_residual = std::max(rep.pairing_residual, dev);
  }
  rep.conjugate_pairing = rep.pairing_residual <= tol;
  if (n == 1) {
    rep.scaled_in_gamma = true;
  } else {
    CVec t(n - 1);
    for (int i = 1; i <= n - 1; ++i)
      t[i - 1] = (double(n - i) / double(n)) * s[i - 1];
    // A p-fold root on the circle is recovered by the eigensolver only to
    // eps^{1/p}, so the inner membership band must absorb that conditioning
    // (e.g. the all-ones point scales to a truncation with one repeated root).
    const double cluster =
        4.0 * std::pow(std::numeric_limits<double>::epsilon(),
                       1.0 / static_cast<double>(n - 1));
    rep.scaled_in_gamma = roots_membership(t, std::max(tol, cluster))
                              .in_closed();
  }
  rep.is_boundary =
      rep.modulus_one && rep.conjugate_pairing && rep.scaled_in_gamma;
  return rep;
}

PencilValues scalar_pencils(int i, Complex alpha, const CVec& s) {
  const int n = static_cast<int>(s.size());
  if (n < 2 || i < 1 || i > n - 1)
    throw std::domain_error("scalar_pencils: index out of range");
  const double k = static_cast<double>(k_const(n, i));
  const Complex si = s[i - 1];
  const Complex sni = s[n - i - 1];
  const Complex sn = s[n - 1];
  const Complex ai = std::pow(alpha, i);
  const Complex ani = std::pow(alpha, n - i);
  const double m2i = std::norm(ai);        // |alpha|^{2i}
  const double m2ni = std::norm(ani);      // |alpha|^{2(n-i)}
  const double m2n = m2i * m2ni;           // |alpha|^{2n}
  const double common = k * k * (1.0 - m2n * std::norm(sn));
  PencilValues out;
  out.phi1 = common + m2i * std::norm(si) - m2ni * std::norm(sni) -
             2.0 * k * std::real(ai * (si - m2ni * std::conj(sni) * sn));
  out.phi2 = common + m2ni * std::norm(sni) - m2i * std::norm(si) -
             2.0 * k * std::real(ani * (sni - m2i * std::conj(si) * sn));
  return out;
}

std::vector<Complex> alpha_grid(int points_per_circle) {
  static const double moduli[] = {0.25, 0.5, 0.75, 1.0};
  std::vector<Complex> grid;
  grid.reserve(4 * points_per_circle);
  for (double r : moduli)
    for (int t = 0; t < points_per_circle; ++t) {
      const double th = 2.0 * std::numbers::pi * t / points_per_circle;
      grid.push_back(r * Complex(std::cos(th), std::sin(th)));
    }
  return grid;
}

CounterexamplePoint counterexample_point(int n, int i, double eps) {
  if (n < 4 || i <= 1 || i >= n - 1 || eps <= 0.0 || eps >= 1.0)
    throw std::domain_error("counterexample_point: parameter out of range");
  CounterexamplePoint out;
  out.s = symmetrize(CVec::Constant(n, Complex(1.0 - eps, 0.0)));
  out.s_i_abs = std::abs(out.s[i - 1]);
  out.exceeds_n = out.s_i_abs > static_cast<double>(n);
  out.verdict = roots_membership(out.s);
  return out;
}

}  // namespace spd
