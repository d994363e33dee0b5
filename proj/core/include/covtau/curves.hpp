#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "covtau/metrics.hpp"
#include "covtau/rational.hpp"

namespace covtau {

/// Identifies a task set: its size plus a digest of the sorted identifiers.
struct TaskUniverse {
  std::size_t size = 0;
  std::uint64_t digest = 0;

  friend bool operator==(const TaskUniverse&, const TaskUniverse&) = default;
};

TaskUniverse universe_of(const SuccessProfile& profile);

/// Cover@tau as a non-increasing step function on [0, 1].
///
/// breakpoints() starts at 0 and ends at 1. values()[0] is G(0) = 1 and
/// values()[j] (j >= 1) is the constant value of G on the half-open interval
/// (breakpoints[j-1], breakpoints[j]], which also equals G(breakpoints[j]).
class CoverCurve {
 public:
  CoverCurve(std::string model, std::vector<Rational> breakpoints,
             std::vector<Rational> values, TaskUniverse universe);

  const std::string& model() const { return model_; }
  const std::vector<Rational>& breakpoints() const { return breakpoints_; }
  const std::vector<Rational>& values() const { return values_; }
  const TaskUniverse& universe() const { return universe_; }

  /// G(tau) for tau in [0, 1].
  const Rational& at(const Rational& tau) const;

 private:
  std::string model_;
  std::vector<Rational> breakpoints_;
  std::vector<Rational> values_;
  TaskUniverse universe_;
};

/// Pass@k sampled on an ascending k grid.
struct PassCurve {
  std::string model;
  std::vector<std::uint64_t> ks;
  std::vector<double> values;
};

CoverCurve build_cover_curve(const SuccessProfile& profile);

PassCurve pass_curve(const SuccessProfile& profile,
                     std::span<const std::uint64_t> ks);

/// Integral of k (1 - tau)^(k-1) G(tau) over [0, 1], summed piece by piece
/// with the closed-form weight (1-a)^k - (1-b)^k of each step.
double beta_weighted_pass(const CoverCurve& curve, std::uint64_t k);

/// Exact area under G.
Rational uniform_auc(const CoverCurve& curve);

/// G(0+): fraction of tasks with p > 0, the k -> infinity limit of Pass@k.
Rational fraction_nonzero(const SuccessProfile& profile);

/// Probability mass of Beta(1, k) on [0, tau], i.e. 1 - (1 - tau)^k.
double beta_mass_below(const Rational& tau, std::uint64_t k);

/// Powers of two 1, 2, 4, ..., 2^max_exponent.
std::vector<std::uint64_t> power_of_two_grid(unsigned max_exponent);

struct SeriesRow {
  double x = 0.0;
  double value = 0.0;
};

/// Rows at the curve's own breakpoints, or at the given grid points.
std::vector<SeriesRow> export_curve(
    const CoverCurve& curve,
    std::optional<std::span<const Rational>> grid = std::nullopt);

/// Rows (k, Pass@k) in grid order.
std::vector<SeriesRow> export_curve(const PassCurve& curve);

}  // namespace covtau
