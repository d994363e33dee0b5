#pragma once

// Independent reference computations for tests. None of these call the code
// path they are used to check.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <vector>

#include "covtau/metrics.hpp"
#include "covtau/rational.hpp"

namespace covtau::oracle {

/// Average over all size-k subsets of n trials (the first c correct) of the
/// indicator "subset holds a correct trial", by enumeration.
inline Rational subset_pass_rate(std::uint64_t n, std::uint64_t c, std::uint64_t k) {
  std::uint64_t hits = 0, total = 0;
  const std::uint64_t correct_mask = (std::uint64_t{1} << c) - 1;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
    if (static_cast<std::uint64_t>(std::popcount(s)) != k) continue;
    ++total;
    if (s & correct_mask) ++hits;
  }
  return Rational(BigInt(hits), BigInt(total));
}

/// (1/T) sum (1 - (1-p)^k) in exact arithmetic; small k only.
inline Rational pass_at_k_rational(const SuccessProfile& profile, std::uint64_t k) {
  Rational sum = 0;
  for (const auto& e : profile.entries()) {
    Rational miss = 1;
    for (std::uint64_t j = 0; j < k; ++j) miss *= (1 - e.p);
    sum += 1 - miss;
  }
  return sum / profile.task_count();
}

/// Integral over [0,1] of max(G_A - G_B, 0), with G evaluated by counting
/// tasks at the right end of each cell of the partition induced by every p.
inline Rational excess_area(const SuccessProfile& a, const SuccessProfile& b) {
  std::vector<Rational> cuts{0, 1};
  for (const auto& e : a.entries()) cuts.push_back(e.p);
  for (const auto& e : b.entries()) cuts.push_back(e.p);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  auto count_at_least = [](const SuccessProfile& p, const Rational& t) {
    std::size_t n = 0;
    for (const auto& e : p.entries()) n += e.p >= t;
    return Rational(BigInt(n), BigInt(p.task_count()));
  };
  Rational area = 0;
  for (std::size_t j = 1; j < cuts.size(); ++j) {
    const Rational gap = count_at_least(a, cuts[j]) - count_at_least(b, cuts[j]);
    if (gap > 0) area += gap * (cuts[j] - cuts[j - 1]);
  }
  return area;
}

}  // namespace covtau::oracle
