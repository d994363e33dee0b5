#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "covtau/curves.hpp"
#include "covtau/rational.hpp"

namespace covtau {

/// Integral over [0, 1] of max(G_A - G_B, 0), exact. Both curves must come
/// from the same task universe.
Rational auc_plus_cover(const CoverCurve& a, const CoverCurve& b);

/// For each curve A, mean of auc_plus_cover(A, B) over the other curves.
std::vector<Rational> avg_auc_plus(std::span<const CoverCurve> curves);

/// True iff G_A >= G_B everywhere on [0, 1].
bool check_cover_dominance(const CoverCurve& a, const CoverCurve& b);

enum class Leader { kFirst, kSecond };

struct CrossoverResult {
  std::string first;
  std::string second;
  /// Smallest grid k at which the leader changes; empty when it never does.
  std::optional<std::uint64_t> k_star;
  /// Leaders before and at k_star; meaningful only when k_star is set.
  Leader before = Leader::kFirst;
  Leader after = Leader::kFirst;
};

/// Scans the shared k grid for a strict reversal of the Pass@k ordering.
/// Grid points where the two values are equal are skipped.
CrossoverResult find_crossover(const PassCurve& a, const PassCurve& b);

struct RankEntry {
  std::string model;
  double value = 0.0;
  int rank = 0;
};

/// Descending by value. Equal values share a rank and ranks are dense
/// (1, 2, 2, 3), matching a best/second/third highlighting scheme. Ties are
/// listed in model-name order.
std::vector<RankEntry> rank_models(const std::map<std::string, double>& values);

struct DominanceReport {
  std::vector<std::string> models;
  /// auc_plus[i][j] = auc_plus_cover(models[i], models[j]); zero diagonal.
  std::vector<std::vector<Rational>> auc_plus;
  std::vector<Rational> avg_auc_plus;
  /// dominates[i][j] = check_cover_dominance(models[i], models[j]).
  std::vector<std::vector<bool>> dominates;
  std::vector<CrossoverResult> crossovers;
  std::map<std::string, std::vector<RankEntry>> rankings;
};

/// Full pairwise comparison of aligned profiles (M >= 2). Rankings cover
/// pass@1, cov@tau for each tau, G(0+), pass@k at the largest grid k, and
/// avg_auc_plus.
DominanceReport build_dominance_report(std::span<const SuccessProfile> aligned,
                                       std::span<const Rational> taus,
                                       std::span<const std::uint64_t> ks);

struct Band {
  double low = 0.0;
  double high = 0.0;
};

struct BootstrapBands {
  std::size_t resamples = 0;
  std::uint64_t seed = 0;
  /// model -> one band per requested tau.
  std::map<std::string, std::vector<Band>> cover;
  /// model -> band on avg_auc_plus (absent when fewer than two models).
  std::map<std::string, Band> avg_auc_plus;
};

inline constexpr std::size_t kDefaultBootstrapResamples = 1000;

/// Percentile (2.5%, 97.5%) bands from resampling tasks with replacement.
/// The same task indices are drawn for every model in a resample.
BootstrapBands bootstrap_bands(std::span<const SuccessProfile> aligned,
                               std::span<const Rational> taus,
                               std::size_t resamples, std::uint64_t seed);

}  // namespace covtau
