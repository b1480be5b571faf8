#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace spd {

using int128 = __int128;

std::string int128_to_string(int128 v);

// Exact binomial coefficient. Returns 0 outside 0 <= k <= n. Throws
// std::overflow_error for n > 66, the last row whose entries all fit in a
// signed 64-bit integer.
std::int64_t binom(int n, int k);

// Difference of binomial products
//   F^{(m)}_{i,l}(j) = C(m,i) C(m,i-l) - C(m,m+2+j-i) C(m,m+2+j-i-l),
// defined for 1 <= i <= m, 0 <= l <= i, i+l-m-2 <= j <= i-2.
// Throws std::domain_error outside that range.
int128 F_val(int m, int i, int l, int j);

// Mirrored difference
//   G^{(m)}_{i',l}(j) = C(m,i'+j) C(m,i'+j-l) - C(m,m+2-i') C(m,m+2-i'-l),
// defined for 2 <= i' <= m+1, 0 <= l <= m+2-i', l-i' <= j <= m-i'.
// Satisfies G^{(m)}_{m+2-i,l}(j) = -F^{(m)}_{i,l}(j) on the common domain.
int128 G_val(int m, int i_prime, int l, int j);

// k(i) = C(n-1,i) + C(n-1,n-i). Equals C(n,i).
std::int64_t k_const(int n, int i);

// The same constant through the falling-product form n(n-1)...(n-i+1)/i!.
std::int64_t k_const_product_form(int n, int i);

struct SignTableReport {
  long long cases_checked = 0;  // (m,i,l) triples examined
  long long checks = 0;         // individual claim evaluations
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Exhaustively verifies, for every 1 <= m <= max_m, 1 <= i <= m, 0 <= l <= i:
//  - the reflection symmetry F(j) = F(2i-m-4+l-j) and the zeros at j = l-2 and
//    j = 2i-m-2;
//  - the sign pattern of F on its j-domain: nonpositive between the two zeros,
//    strictly positive on both flanks (the zeros swap order between the
//    parameter regimes l >= 2i-m and l < 2i-m);
//  - that j* = floor(i-(m-l+5)/2)+1 attains the global minimum, the minimum is
//    nonpositive, and F is weakly decreasing before j* and weakly increasing
//    after (adjacent ties are legitimate);
//  - the mirrored claims for G with i' = m+2-i, maximizer floor((m+l-1)/2-i')+1;
//  - the pointwise identity G^{(m)}_{m+2-i,l} = -F^{(m)}_{i,l}.
SignTableReport verify_sign_tables(int max_m);

}  // namespace spd
