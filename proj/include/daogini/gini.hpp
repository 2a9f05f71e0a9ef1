#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "daogini/bigint.hpp"
#include "daogini/holder.hpp"

namespace daogini {

// Strictly positive balances in descending order, with count and exact total.
// The input shape for all Gini and partition math.
class SortedDistribution {
 public:
  // Sorts a copy descending; every entry must be > 0.
  static SortedDistribution from_balances(std::vector<Balance> balances);
  static SortedDistribution from_snapshot(const HolderSnapshot& snapshot);

  std::size_t size() const { return balances_.size(); }
  const Balance& total() const { return total_; }
  const std::vector<Balance>& balances() const { return balances_; }

  // Copy of the half-open index range [first, last).
  SortedDistribution slice(std::size_t first, std::size_t last) const;

 private:
  SortedDistribution() = default;

  std::vector<Balance> balances_;
  Balance total_ = 0;
};

// Group boundaries over a sorted distribution:
//   C = [0, c_end)   D = [c_end, n)
//   E = [0, e_end)   F = [e_end, c_end)     (within C, once e_end is set)
struct Partition {
  std::size_t c_end = 0;
  std::optional<std::size_t> e_end;
};

// The five per-token inequality metrics, each in [0, 1).
struct GiniBundle {
  double g_all = 0;  // whole distribution
  double g_c = 0;    // larger-holder half
  double g_d = 0;    // smaller-holder half
  double g_e = 0;    // top part of C holding ~half its mass
  double g_f = 0;    // remainder of C
};

// Sorted-rank Gini. With the n balances taken ascending as x_1..x_n:
//   G = (2 * sum_i i*x_i) / (n * sum_i x_i) - (n + 1) / n
// Partial sums are exact integers; the only rounding is the final division.
// n = 1 returns exactly 0. Throws DegenerateError when the total is zero.
double gini(const SortedDistribution& dist);

// Mean-absolute-difference form, sum_i sum_j |x_i - x_j| / (2 n^2 mu),
// evaluated by exhaustive O(n^2) pair summation with an exact integer
// numerator. Verification oracle for `gini`; not the production path.
double gini_pairwise_oracle(const SortedDistribution& dist);

// Splits into two groups of equal wallet count; odd counts give the extra
// wallet to the top group C, so c_end = ceil(n/2). Requires n >= 2.
Partition split_equal_count(const SortedDistribution& dist);

// Within C = [0, base.c_end), picks the prefix cut e_end in [1, c_end-1]
// whose prefix mass is nearest to half of C's total, ties toward the
// smaller cut. Requires |C| >= 2. Comparison is exact (no halving).
Partition split_equal_mass(const SortedDistribution& dist, Partition base);

// Full pipeline for one token: equal-count split, equal-mass sub-split of C,
// then Gini of the whole and of each group. Requires at least 4 positive
// balances so groups C and D both have two or more wallets.
GiniBundle compute_bundle(const SortedDistribution& dist);
GiniBundle compute_bundle(const HolderSnapshot& snapshot);

}  // namespace daogini
