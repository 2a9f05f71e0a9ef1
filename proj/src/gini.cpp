#include "daogini/gini.hpp"

#include <algorithm>
#include <functional>

#include "daogini/errors.hpp"

namespace daogini {

SortedDistribution SortedDistribution::from_balances(std::vector<Balance> balances) {
  for (const auto& b : balances) {
    if (b <= 0) throw ValidationError("distribution entries must be strictly positive");
  }
  std::sort(balances.begin(), balances.end(), std::greater<>());
  SortedDistribution dist;
  dist.balances_ = std::move(balances);
  for (const auto& b : dist.balances_) dist.total_ += b;
  return dist;
}

SortedDistribution SortedDistribution::from_snapshot(const HolderSnapshot& snapshot) {
  // Snapshot records are already descending and strictly positive.
  SortedDistribution dist;
  dist.balances_.reserve(snapshot.size());
  for (const auto& r : snapshot.records()) dist.balances_.push_back(r.balance);
  dist.total_ = snapshot.total_balance();
  return dist;
}

SortedDistribution SortedDistribution::slice(std::size_t first, std::size_t last) const {
  if (first > last || last > balances_.size())
    throw ValidationError("slice [" + std::to_string(first) + ", " + std::to_string(last) +
                          ") out of range for n=" + std::to_string(balances_.size()));
  SortedDistribution out;
  out.balances_.assign(balances_.begin() + static_cast<std::ptrdiff_t>(first),
                       balances_.begin() + static_cast<std::ptrdiff_t>(last));
  for (const auto& b : out.balances_) out.total_ += b;
  return out;
}

double gini(const SortedDistribution& dist) {
  const auto& b = dist.balances();
  const std::size_t n = b.size();
  if (n == 0) throw DegenerateError("degenerate distribution: no balances");
  if (dist.total() == 0) throw DegenerateError("degenerate distribution: zero total");
  if (n == 1) return 0.0;

  // b is descending, so b[j] has ascending rank n - j. All sums stay exact.
  Balance rank_weighted = 0;
  for (std::size_t j = 0; j < n; ++j) rank_weighted += Balance(n - j) * b[j];

  const Balance& s0 = dist.total();
  Balance numerator = 2 * rank_weighted - Balance(n + 1) * s0;
  Balance denominator = Balance(n) * s0;
  return ratio_to_double(numerator, denominator);
}

double gini_pairwise_oracle(const SortedDistribution& dist) {
  const auto& b = dist.balances();
  const std::size_t n = b.size();
  if (n == 0) throw DegenerateError("degenerate distribution: no balances");
  if (dist.total() == 0) throw DegenerateError("degenerate distribution: zero total");

  Balance abs_diff_sum = 0;  // over ordered pairs (i, j), i != j
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      Balance d = b[i] - b[j];
      if (d < 0) d = -d;
      abs_diff_sum += 2 * d;
    }
  }
  // Denominator 2 n^2 mu = 2 n * total.
  Balance denominator = 2 * Balance(n) * dist.total();
  return ratio_to_double(abs_diff_sum, denominator);
}

Partition split_equal_count(const SortedDistribution& dist) {
  const std::size_t n = dist.size();
  if (n < 2) throw DegenerateError("cannot split: need at least 2 wallets, have " +
                                   std::to_string(n));
  Partition p;
  p.c_end = (n + 1) / 2;  // odd n: extra wallet joins the top group
  return p;
}

Partition split_equal_mass(const SortedDistribution& dist, Partition base) {
  const std::size_t c = base.c_end;
  if (c < 2 || c > dist.size())
    throw DegenerateError("cannot sub-split: group C has " + std::to_string(c) + " wallet(s)");

  const auto& b = dist.balances();
  Balance total_c = 0;
  for (std::size_t i = 0; i < c; ++i) total_c += b[i];

  // Minimize |prefix(k) - total_c / 2| by comparing |2*prefix(k) - total_c|
  // exactly; ties resolve toward the smaller k.
  Balance prefix = 0;
  Balance best_dev = 0;
  std::size_t best_k = 0;
  for (std::size_t k = 1; k <= c - 1; ++k) {
    prefix += b[k - 1];
    Balance dev = 2 * prefix - total_c;
    if (dev < 0) dev = -dev;
    if (best_k == 0 || dev < best_dev) {
      best_dev = dev;
      best_k = k;
    }
  }
  base.e_end = best_k;
  return base;
}

GiniBundle compute_bundle(const SortedDistribution& dist) {
  const std::size_t n = dist.size();
  if (n < 4) {
    std::string which = n <= 1 ? "group D would be empty"
                     : n == 2  ? "group F would be empty (group C has a single wallet)"
                               : "group D would have fewer than 2 wallets";
    throw DegenerateError("too few records for a bundle (n=" + std::to_string(n) + ", need 4): " +
                          which);
  }

  Partition part = split_equal_count(dist);
  SortedDistribution c = dist.slice(0, part.c_end);
  SortedDistribution d = dist.slice(part.c_end, n);
  part = split_equal_mass(dist, part);
  SortedDistribution e = dist.slice(0, *part.e_end);
  SortedDistribution f = dist.slice(*part.e_end, part.c_end);

  GiniBundle bundle;
  bundle.g_all = gini(dist);
  bundle.g_c = gini(c);
  bundle.g_d = gini(d);
  bundle.g_e = gini(e);
  bundle.g_f = gini(f);
  return bundle;
}

GiniBundle compute_bundle(const HolderSnapshot& snapshot) {
  return compute_bundle(SortedDistribution::from_snapshot(snapshot));
}

}  // namespace daogini
