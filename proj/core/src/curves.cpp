#include "covtau/curves.hpp"

#include <algorithm>
#include <cmath>

#include "covtau/error.hpp"

namespace covtau {

TaskUniverse universe_of(const SuccessProfile& profile) {
  // FNV-1a over the sorted identifiers, NUL-separated.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& e : profile.entries()) {
    for (unsigned char ch : e.task) {
      h ^= ch;
      h *= 0x100000001b3ULL;
    }
    h ^= 0;
    h *= 0x100000001b3ULL;
  }
  return {profile.task_count(), h};
}

CoverCurve::CoverCurve(std::string model, std::vector<Rational> breakpoints,
                       std::vector<Rational> values, TaskUniverse universe)
    : model_(std::move(model)),
      breakpoints_(std::move(breakpoints)),
      values_(std::move(values)),
      universe_(universe) {
  if (breakpoints_.size() < 2 || breakpoints_.size() != values_.size()) {
    throw Error("cover curve needs matching breakpoints and values, at least two");
  }
  if (breakpoints_.front() != 0 || breakpoints_.back() != 1) {
    throw Error("cover curve breakpoints must span [0, 1]");
  }
  if (values_.front() != 1) throw Error("cover curve must start at G(0) = 1");
  for (std::size_t j = 1; j < breakpoints_.size(); ++j) {
    if (breakpoints_[j] <= breakpoints_[j - 1]) {
      throw Error("cover curve breakpoints must be strictly ascending");
    }
    if (values_[j] > values_[j - 1] || values_[j] < 0) {
      throw Error("cover curve values must be non-increasing in [0, 1]");
    }
  }
}

const Rational& CoverCurve::at(const Rational& tau) const {
  if (tau < 0 || tau > 1) throw Error("tau " + to_string(tau) + " is outside [0, 1]");
  const auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), tau);
  return values_[static_cast<std::size_t>(it - breakpoints_.begin())];
}

CoverCurve build_cover_curve(const SuccessProfile& profile) {
  if (profile.task_count() == 0) throw Error("cover curve of an empty profile");
  std::vector<Rational> ps;
  ps.reserve(profile.task_count());
  for (const auto& e : profile.entries()) ps.push_back(e.p);
  std::sort(ps.begin(), ps.end());

  std::vector<Rational> breakpoints = ps;
  breakpoints.push_back(0);
  breakpoints.push_back(1);
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());

  const BigInt total(ps.size());
  std::vector<Rational> values;
  values.reserve(breakpoints.size());
  for (const auto& b : breakpoints) {
    const auto first_at_least = std::lower_bound(ps.begin(), ps.end(), b);
    values.emplace_back(BigInt(ps.end() - first_at_least), total);
  }
  return CoverCurve(profile.model(), std::move(breakpoints), std::move(values),
                    universe_of(profile));
}

PassCurve pass_curve(const SuccessProfile& profile, std::span<const std::uint64_t> ks) {
  if (ks.empty()) throw Error("pass curve needs at least one k");
  for (std::size_t i = 1; i < ks.size(); ++i) {
    if (ks[i] <= ks[i - 1]) throw Error("pass curve k grid must be strictly ascending");
  }
  PassCurve out{profile.model(), {ks.begin(), ks.end()}, {}};
  out.values.reserve(ks.size());
  for (auto k : ks) out.values.push_back(pass_at_k_exact(profile, k));
  return out;
}

namespace {

// (1 - b)^k with 1 - b formed exactly before rounding.
double survival_weight(const Rational& b, std::uint64_t k) {
  return std::pow(to_double(Rational(1 - b)), static_cast<double>(k));
}

}  // namespace

double beta_weighted_pass(const CoverCurve& curve, std::uint64_t k) {
  if (k < 1) throw Error("beta weighting requires k >= 1");
  const auto& bp = curve.breakpoints();
  const auto& vals = curve.values();
  double sum = 0.0;
  double left = 1.0;  // (1 - 0)^k
  for (std::size_t j = 1; j < bp.size(); ++j) {
    const double right = survival_weight(bp[j], k);
    if (vals[j] != 0) sum += to_double(vals[j]) * (left - right);
    left = right;
  }
  return sum;
}

Rational uniform_auc(const CoverCurve& curve) {
  const auto& bp = curve.breakpoints();
  const auto& vals = curve.values();
  Rational area = 0;
  for (std::size_t j = 1; j < bp.size(); ++j) area += vals[j] * (bp[j] - bp[j - 1]);
  return area;
}

Rational fraction_nonzero(const SuccessProfile& profile) {
  if (profile.task_count() == 0) throw Error("fraction_nonzero of an empty profile");
  std::size_t positive = 0;
  for (const auto& e : profile.entries()) {
    if (e.p > 0) ++positive;
  }
  return Rational(BigInt(positive), BigInt(profile.task_count()));
}

double beta_mass_below(const Rational& tau, std::uint64_t k) {
  if (tau < 0 || tau > 1) throw Error("tau " + to_string(tau) + " is outside [0, 1]");
  if (k < 1) throw Error("beta weighting requires k >= 1");
  return 1.0 - survival_weight(tau, k);
}

std::vector<std::uint64_t> power_of_two_grid(unsigned max_exponent) {
  std::vector<std::uint64_t> ks;
  for (unsigned e = 0; e <= max_exponent; ++e) ks.push_back(std::uint64_t{1} << e);
  return ks;
}

std::vector<SeriesRow> export_curve(const CoverCurve& curve,
                                    std::optional<std::span<const Rational>> grid) {
  std::vector<SeriesRow> rows;
  if (!grid || grid->empty()) {
    for (std::size_t j = 0; j < curve.breakpoints().size(); ++j) {
      rows.push_back({to_double(curve.breakpoints()[j]), to_double(curve.values()[j])});
    }
    return rows;
  }
  for (const auto& tau : *grid) {
    if (tau < 0 || tau > 1) throw Error("grid point " + to_string(tau) + " is outside [0, 1]");
    rows.push_back({to_double(tau), to_double(curve.at(tau))});
  }
  return rows;
}

std::vector<SeriesRow> export_curve(const PassCurve& curve) {
  std::vector<SeriesRow> rows;
  rows.reserve(curve.ks.size());
  for (std::size_t i = 0; i < curve.ks.size(); ++i) {
    rows.push_back({static_cast<double>(curve.ks[i]), curve.values[i]});
  }
  return rows;
}

}  // namespace covtau
