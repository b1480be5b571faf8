#include "spd/combinatorics.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "doctest.h"

namespace {

// Independent oracle: Pascal recurrence carried in 128-bit integers.
std::vector<spd::int128> pascal_row_oracle(int n) {
  std::vector<spd::int128> row{1};
  for (int r = 1; r <= n; ++r) {
    std::vector<spd::int128> next(static_cast<std::size_t>(r) + 1, 1);
    for (int k = 1; k < r; ++k)
      next[static_cast<std::size_t>(k)] =
          row[static_cast<std::size_t>(k - 1)] + row[static_cast<std::size_t>(k)];
    row = std::move(next);
  }
  return row;
}

}  // namespace

TEST_SUITE("combinatorics") {

TEST_CASE("binom matches the Pascal oracle on every representable row") {
  for (int n = 0; n <= 66; ++n) {
    const auto row = pascal_row_oracle(n);
    for (int k = 0; k <= n; ++k)
      CHECK(static_cast<spd::int128>(spd::binom(n, k)) ==
            row[static_cast<std::size_t>(k)]);
  }
}

TEST_CASE("binom frozen values and edge behavior") {
  CHECK(spd::binom(30, 15) == 155117520);
  CHECK(spd::binom(0, 0) == 1);
  CHECK(spd::binom(5, -1) == 0);
  CHECK(spd::binom(5, 6) == 0);
  CHECK(spd::binom(-3, 0) == 0);
  CHECK_THROWS_AS((void)spd::binom(67, 33), std::overflow_error);
}

TEST_CASE("F and G frozen values") {
  // F(5,3,1,0) = C(5,3)C(5,2) - C(5,4)C(5,3) = 100 - 50.
  CHECK(spd::F_val(5, 3, 1, 0) == 50);
  // Mirror at i' = 4 flips the sign.
  CHECK(spd::G_val(5, 4, 1, 0) == -50);
  // F(6,4,2,1) = C(6,4)C(6,2) - C(6,5)C(6,3) = 225 - 120.
  CHECK(spd::F_val(6, 4, 2, 1) == 105);
  // Structural zero at j = l-2.
  CHECK(spd::F_val(5, 3, 1, -1) == 0);
  CHECK_THROWS_AS((void)spd::F_val(5, 3, 1, -4), std::domain_error);
  CHECK_THROWS_AS((void)spd::G_val(5, 1, 1, 0), std::domain_error);
}

TEST_CASE("F against a direct recomputation over its whole domain") {
  for (int m = 1; m <= 10; ++m)
    for (int i = 1; i <= m; ++i)
      for (int l = 0; l <= i; ++l)
        for (int j = i + l - m - 2; j <= i - 2; ++j) {
          const spd::int128 direct =
              static_cast<spd::int128>(spd::binom(m, i)) * spd::binom(m, i - l) -
              static_cast<spd::int128>(spd::binom(m, m + 2 + j - i)) *
                  spd::binom(m, m + 2 + j - i - l);
          CHECK(spd::F_val(m, i, l, j) == direct);
        }
}

TEST_CASE("k constant: frozen values and agreement of all three forms") {
  CHECK(spd::k_const(4, 1) == 4);
  CHECK(spd::k_const(4, 2) == 6);
  CHECK(spd::k_const(10, 4) == 210);
  for (int n = 2; n <= 30; ++n)
    for (int i = 1; i <= n - 1; ++i) {
      const std::int64_t sum_form = spd::k_const(n, i);
      CHECK(sum_form == spd::k_const_product_form(n, i));
      CHECK(sum_form == spd::binom(n, i));
    }
}

TEST_CASE("sign tables hold exhaustively through m = 8") {
  const auto report = spd::verify_sign_tables(8);
  CHECK(report.cases_checked > 0);
  for (const auto& v : report.violations) MESSAGE(v);
  CHECK(report.ok());
}

TEST_CASE("int128 printing") {
  CHECK(spd::int128_to_string(0) == "0");
  CHECK(spd::int128_to_string(-50) == "-50");
  spd::int128 big = spd::binom(60, 30);
  big *= spd::binom(60, 30);
  CHECK(spd::int128_to_string(big).size() > 18);
}

}  // TEST_SUITE
