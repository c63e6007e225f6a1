#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

namespace sparserec {

/// C(n, k), saturating at UINT64_MAX.
inline std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    const std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
    if (r > UINT64_MAX / num) return UINT64_MAX;
    r = r * num / static_cast<std::uint64_t>(i);
  }
  return r;
}

/// Calls fn(subset) for every k-subset of {0..n-1} in lexicographic order.
/// fn may return false to stop early.
template <class Fn>
void for_each_subset(int n, int k, Fn&& fn) {
  if (k < 0 || k > n) return;
  std::vector<int> s(static_cast<std::size_t>(k));
  std::iota(s.begin(), s.end(), 0);
  while (true) {
    if (!fn(static_cast<const std::vector<int>&>(s))) return;
    int i = k - 1;
    while (i >= 0 && s[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return;
    ++s[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) s[static_cast<std::size_t>(j)] = s[static_cast<std::size_t>(j - 1)] + 1;
  }
}

/// Uniform random k-subset of {0..n-1}, sorted.
inline std::vector<int> random_subset(int n, int k, std::mt19937_64& rng) {
  std::vector<int> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), 0);
  for (int i = 0; i < k; ++i) {
    std::uniform_int_distribution<int> pick(i, n - 1);
    std::swap(all[static_cast<std::size_t>(i)], all[static_cast<std::size_t>(pick(rng))]);
  }
  all.resize(static_cast<std::size_t>(k));
  std::sort(all.begin(), all.end());
  return all;
}

}  // namespace sparserec
