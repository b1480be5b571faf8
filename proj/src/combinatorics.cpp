#include "spd/combinatorics.hpp"

#include <array>
#include <limits>
#include <stdexcept>

namespace spd {

namespace {

constexpr int kMaxBinomRow = 66;

// Pascal triangle rows 0..66; every entry of row 66 fits in int64.
const std::vector<std::vector<std::int64_t>>& pascal_table() {
  static const std::vector<std::vector<std::int64_t>> table = [] {
    std::vector<std::vector<std::int64_t>> t(kMaxBinomRow + 1);
    for (int n = 0; n <= kMaxBinomRow; ++n) {
      t[n].assign(static_cast<std::size_t>(n) + 1, 1);
      for (int k = 1; k < n; ++k) t[n][k] = t[n - 1][k - 1] + t[n - 1][k];
    }
    return t;
  }();
  return table;
}

int floordiv(int a, int b) {
  // b > 0
  return (a >= 0) ? a / b : -((-a + b - 1) / b);
}

struct ViolationSink {
  SignTableReport* report;
  static constexpr std::size_t kCap = 200;
  void note(const std::string& msg) {
    if (report->violations.size() < kCap) report->violations.push_back(msg);
    else if (report->violations.size() == kCap)
      report->violations.push_back("... further violations suppressed");
  }
  void check(bool cond, const std::string& msg) {
    ++report->checks;
    if (!cond) note(msg);
  }
};

std::string ctx(const char* fn, int m, int i, int l, int j) {
  return std::string(fn) + " m=" + std::to_string(m) + " i=" + std::to_string(i) +
         " l=" + std::to_string(l) + " j=" + std::to_string(j);
}

}  // namespace

std::string int128_to_string(int128 v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : v;
  std::string digits;
  while (u > 0) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (neg) digits.push_back('-');
  return std::string(digits.rbegin(), digits.rend());
}

std::int64_t binom(int n, int k) {
  if (n < 0) return 0;
  if (k < 0 || k > n) return 0;
  if (n > kMaxBinomRow)
    throw std::overflow_error("binom: value exceeds 64-bit range for n > 66");
  return pascal_table()[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
}

int128 F_val(int m, int i, int l, int j) {
  if (m < 1 || i < 1 || i > m || l < 0 || l > i || j < i + l - m - 2 || j > i - 2)
    throw std::domain_error("F_val: index outside domain");
  const int128 a = static_cast<int128>(binom(m, i)) * binom(m, i - l);
  const int128 b =
      static_cast<int128>(binom(m, m + 2 + j - i)) * binom(m, m + 2 + j - i - l);
  return a - b;
}

int128 G_val(int m, int i_prime, int l, int j) {
  if (m < 1 || i_prime < 2 || i_prime > m + 1 || l < 0 || l > m + 2 - i_prime ||
      j < l - i_prime || j > m - i_prime)
    throw std::domain_error("G_val: index outside domain");
  const int128 a =
      static_cast<int128>(binom(m, i_prime + j)) * binom(m, i_prime + j - l);
  const int128 b =
      static_cast<int128>(binom(m, m + 2 - i_prime)) * binom(m, m + 2 - i_prime - l);
  return a - b;
}

std::int64_t k_const(int n, int i) {
  if (n < 2 || i < 1 || i > n - 1)
    throw std::domain_error("k_const: requires n >= 2 and 1 <= i <= n-1");
  return binom(n - 1, i) + binom(n - 1, n - i);
}

std::int64_t k_const_product_form(int n, int i) {
  if (n < 2 || i < 1 || i > n - 1)
    throw std::domain_error("k_const_product_form: requires n >= 2 and 1 <= i <= n-1");
  int128 num = 1;
  for (int k = 0; k < i; ++k) num *= (n - k);
  int128 den = 1;
  for (int k = 2; k <= i; ++k) den *= k;
  const int128 v = num / den;
  if (v > std::numeric_limits<std::int64_t>::max())
    throw std::overflow_error("k_const_product_form: value exceeds 64-bit range");
  return static_cast<std::int64_t>(v);
}

SignTableReport verify_sign_tables(int max_m) {
  SignTableReport report;
  ViolationSink sink{&report};

  for (int m = 1; m <= max_m; ++m) {
    for (int i = 1; i <= m; ++i) {
      for (int l = 0; l <= i; ++l) {
        ++report.cases_checked;
        const int lo = i + l - m - 2;
        const int hi = i - 2;
        std::vector<int128> f(static_cast<std::size_t>(hi - lo + 1));
        for (int j = lo; j <= hi; ++j) f[static_cast<std::size_t>(j - lo)] = F_val(m, i, l, j);
        auto F = [&](int j) { return f[static_cast<std::size_t>(j - lo)]; };

        // Reflection and zeros; both zero locations always lie in the domain.
        for (int j = lo; j <= hi; ++j)
          sink.check(F(j) == F(2 * i - m - 4 + l - j),
                     ctx("F reflection", m, i, l, j));
        sink.check(F(l - 2) == 0, ctx("F zero at l-2", m, i, l, l - 2));
        sink.check(F(2 * i - m - 2) == 0,
                   ctx("F zero at 2i-m-2", m, i, l, 2 * i - m - 2));

        // Sign pattern. The middle (nonpositive) range is bounded by the two
        // zeros, whose order depends on the parameter regime.
        const int z1 = 2 * i - m - 2;
        const int z2 = l - 2;
        const int mid_lo = (l >= 2 * i - m) ? z1 : z2;
        const int mid_hi = (l >= 2 * i - m) ? z2 : z1;
        for (int j = mid_lo; j <= mid_hi; ++j)
          sink.check(F(j) <= 0, ctx("F nonpositive mid-range", m, i, l, j));
        for (int j = lo; j < mid_lo; ++j)
          sink.check(F(j) > 0, ctx("F positive left flank", m, i, l, j));
        for (int j = mid_hi + 1; j <= hi; ++j)
          sink.check(F(j) > 0, ctx("F positive right flank", m, i, l, j));

        // Extremizer: value-level check with weak monotonicity on both sides.
        const int jstar = floordiv(2 * i - m + l - 5, 2) + 1;
        sink.check(jstar >= lo && jstar <= hi, ctx("F minimizer in domain", m, i, l, jstar));
        if (jstar >= lo && jstar <= hi) {
          int128 mn = F(lo);
          for (int j = lo + 1; j <= hi; ++j)
            if (F(j) < mn) mn = F(j);
          sink.check(F(jstar) == mn, ctx("F minimizer attains minimum", m, i, l, jstar));
          sink.check(F(jstar) <= 0, ctx("F minimum nonpositive", m, i, l, jstar));
          for (int j = lo; j < jstar; ++j)
            sink.check(F(j) >= F(j + 1), ctx("F weakly decreasing before min", m, i, l, j));
          for (int j = jstar; j < hi; ++j)
            sink.check(F(j) <= F(j + 1), ctx("F weakly increasing after min", m, i, l, j));
        }

        // Mirrored function, same (m,i,l) case under i' = m+2-i. Its j-domain
        // coincides with F's, and G = -F pointwise.
        const int ip = m + 2 - i;
        for (int j = lo; j <= hi; ++j) {
          sink.check(G_val(m, ip, l, j) == -F(j), ctx("G equals -F", m, ip, l, j));
        }
        auto G = [&](int j) { return -F(j); };
        for (int j = lo; j <= hi; ++j)
          sink.check(G(j) == G(m - 2 * ip + l - j), ctx("G reflection", m, ip, l, j));
        sink.check(G(l - 2) == 0, ctx("G zero at l-2", m, ip, l, l - 2));
        sink.check(G(m - 2 * ip + 2) == 0,
                   ctx("G zero at m-2i'+2", m, ip, l, m - 2 * ip + 2));
        // m-2i'+2 = 2i-m-2, so the mid-range endpoints mirror F's exactly.
        for (int j = mid_lo; j <= mid_hi; ++j)
          sink.check(G(j) >= 0, ctx("G nonnegative mid-range", m, ip, l, j));
        for (int j = lo; j < mid_lo; ++j)
          sink.check(G(j) < 0, ctx("G negative left flank", m, ip, l, j));
        for (int j = mid_hi + 1; j <= hi; ++j)
          sink.check(G(j) < 0, ctx("G negative right flank", m, ip, l, j));

        const int jmax = floordiv(m + l - 1 - 2 * ip, 2) + 1;
        sink.check(jmax == jstar, ctx("G maximizer matches F minimizer", m, ip, l, jmax));
        if (jmax >= lo && jmax <= hi) {
          int128 mx = G(lo);
          for (int j = lo + 1; j <= hi; ++j)
            if (G(j) > mx) mx = G(j);
          sink.check(G(jmax) == mx, ctx("G maximizer attains maximum", m, ip, l, jmax));
          sink.check(G(jmax) >= 0, ctx("G maximum nonnegative", m, ip, l, jmax));
          for (int j = lo; j < jmax; ++j)
            sink.check(G(j) <= G(j + 1), ctx("G weakly increasing before max", m, ip, l, j));
          for (int j = jmax; j < hi; ++j)
            sink.check(G(j) >= G(j + 1), ctx("G weakly decreasing after max", m, ip, l, j));
        }
      }
    }
  }
  return report;
}

}  // namespace spd
