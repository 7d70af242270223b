#pragma once

// Subsets of a ground set [0, n) packed into a single machine word.
// Everything in this library is capped at n <= 63 so that a full ground
// set plus a sentinel always fits.

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cvx {

using SubsetMask = std::uint64_t;

inline constexpr int kMaxGround = 63;

inline constexpr SubsetMask bit(int i) { return SubsetMask{1} << i; }

inline constexpr SubsetMask full_mask(int n) { return (SubsetMask{1} << n) - 1; }

inline constexpr bool has_bit(SubsetMask m, int i) { return (m >> i) & 1; }

inline constexpr bool subset_of(SubsetMask a, SubsetMask b) { return (a & ~b) == 0; }

inline int popcount(SubsetMask m) { return std::popcount(m); }

inline int lowest_bit(SubsetMask m) { return std::countr_zero(m); }

inline void check_ground(int n) {
  if (n < 1 || n > kMaxGround)
    throw std::invalid_argument("ground size must be in [1, " + std::to_string(kMaxGround) +
                                "], got " + std::to_string(n));
}

inline std::vector<int> mask_indices(SubsetMask m) {
  std::vector<int> out;
  for (SubsetMask t = m; t; t &= t - 1) out.push_back(std::countr_zero(t));
  return out;
}

template <class Seq>
SubsetMask mask_of(const Seq& indices) {
  SubsetMask m = 0;
  for (int i : indices) m |= bit(i);
  return m;
}

// Next k-subset of the same popcount in increasing numeric order (Gosper).
// Returns 0 once the range [0, 2^n) is exhausted.
inline SubsetMask next_same_popcount(SubsetMask v, int n) {
  SubsetMask c = v & (~v + 1);
  SubsetMask r = v + c;
  SubsetMask next = (((r ^ v) >> 2) / c) | r;
  return next < (SubsetMask{1} << n) ? next : 0;
}

// Visits all popcount-k subsets of [0, n) in increasing numeric order.
template <class Fn>
void for_each_subset_of_size(int n, int k, Fn&& fn) {
  if (k < 0 || k > n) return;
  if (k == 0) {
    fn(SubsetMask{0});
    return;
  }
  for (SubsetMask m = full_mask(k); m; m = next_same_popcount(m, n)) fn(m);
}

inline std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

inline int hex_width(int n) { return (n + 3) / 4; }

inline std::string mask_to_hex(SubsetMask m, int n) {
  static const char* digits = "0123456789abcdef";
  int w = hex_width(n);
  std::string s(w, '0');
  for (int i = 0; i < w; ++i) s[w - 1 - i] = digits[(m >> (4 * i)) & 0xf];
  return s;
}

inline SubsetMask mask_from_hex(const std::string& s, int n) {
  if (s.size() != static_cast<std::size_t>(hex_width(n)))
    throw std::invalid_argument("hex mask '" + s + "' must have exactly " +
                                std::to_string(hex_width(n)) + " digits for ground size " +
                                std::to_string(n));
  SubsetMask m = 0;
  for (char c : s) {
    int d;
    if (c >= '0' && c <= '9') d = c - '0';
    else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
    else throw std::invalid_argument("hex mask '" + s + "' has invalid digit '" + std::string(1, c) + "'");
    m = (m << 4) | static_cast<SubsetMask>(d);
  }
  if (!subset_of(m, full_mask(n)))
    throw std::invalid_argument("hex mask '" + s + "' has bits beyond ground size " + std::to_string(n));
  return m;
}

}  // namespace cvx
