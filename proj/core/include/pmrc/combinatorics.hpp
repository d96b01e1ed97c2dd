#pragma once

#include <cstddef>
#include <numeric>
#include <vector>

namespace pmrc {

// Visits every r-subset of {0, ..., n-1} in lexicographic order. The visitor
// returns false to stop early. Returns false iff stopped early.
template <typename Visitor>
bool for_each_combination(std::size_t n, std::size_t r, Visitor&& visit) {
  if (r > n) return true;
  std::vector<std::size_t> idx(r);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  while (true) {
    if (!visit(static_cast<const std::vector<std::size_t>&>(idx))) return false;
    std::size_t i = r;
    while (i > 0 && idx[i - 1] == n - r + (i - 1)) --i;
    if (i == 0) return true;
    ++idx[i - 1];
    for (std::size_t j = i; j < r; ++j) idx[j] = idx[j - 1] + 1;
  }
}

constexpr std::size_t binomial(std::size_t n, std::size_t r) noexcept {
  if (r > n) return 0;
  std::size_t result = 1;
  for (std::size_t i = 1; i <= r; ++i) result = result * (n - r + i) / i;
  return result;
}

}  // namespace pmrc
