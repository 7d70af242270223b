#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "cvx/mask.hpp"

using namespace cvx;

TEST_CASE("subset enumeration by size matches brute force") {
  for (int n = 0; n <= 10; ++n)
    for (int k = 0; k <= n; ++k) {
      std::vector<SubsetMask> got;
      for_each_subset_of_size(n, k, [&](SubsetMask m) { got.push_back(m); });
      std::vector<SubsetMask> want;
      for (SubsetMask m = 0; m < (SubsetMask{1} << n); ++m)
        if (popcount(m) == k) want.push_back(m);
      CHECK(got == want);  // same sets, same (ascending) order
    }
}

TEST_CASE("binomial agrees with enumeration counts") {
  for (int n = 0; n <= 12; ++n)
    for (int k = 0; k <= n; ++k) {
      std::uint64_t cnt = 0;
      for_each_subset_of_size(n, k, [&](SubsetMask) { ++cnt; });
      CHECK(binomial(n, k) == cnt);
    }
  CHECK(binomial(136, 4) == 13633830ull);
}

TEST_CASE("mask/index conversions round-trip") {
  for (SubsetMask m = 0; m < 256; ++m) {
    auto idx = mask_indices(m);
    CHECK(mask_of(idx) == m);
    CHECK(static_cast<int>(idx.size()) == popcount(m));
  }
}

TEST_CASE("hex encoding is fixed-width lowercase and bit-exact") {
  CHECK(mask_to_hex(0x0, 7) == "00");
  CHECK(mask_to_hex(0x7f, 7) == "7f");
  CHECK(mask_to_hex(0x1, 4) == "1");
  CHECK(mask_to_hex(0xabc, 12) == "abc");
  for (int n : {1, 4, 5, 7, 13, 63}) {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 50; ++t) {
      SubsetMask m = rng() & full_mask(n);
      CHECK(mask_from_hex(mask_to_hex(m, n), n) == m);
    }
  }
  CHECK_THROWS_AS(mask_from_hex("f", 7), std::invalid_argument);   // wrong width
  CHECK_THROWS_AS(mask_from_hex("80", 7), std::invalid_argument);  // bit 7 out of range
  CHECK_THROWS_AS(mask_from_hex("0G", 7), std::invalid_argument);
}
