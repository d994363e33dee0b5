#include "covtau/dominance.hpp"

#include <algorithm>
#include <cmath>

#include "covtau/error.hpp"
#include "covtau/random.hpp"

namespace covtau {
namespace {

void require_same_universe(const CoverCurve& a, const CoverCurve& b) {
  if (a.universe() != b.universe()) {
    throw Error("curves for '" + a.model() + "' (" + std::to_string(a.universe().size) +
                " tasks) and '" + b.model() + "' (" + std::to_string(b.universe().size) +
                " tasks) are over different task sets; align them first");
  }
}

// Union of both breakpoint lists, ascending, starting at 0 and ending at 1.
std::vector<Rational> merged_breakpoints(const CoverCurve& a, const CoverCurve& b) {
  std::vector<Rational> merged;
  merged.reserve(a.breakpoints().size() + b.breakpoints().size());
  std::set_union(a.breakpoints().begin(), a.breakpoints().end(), b.breakpoints().begin(),
                 b.breakpoints().end(), std::back_inserter(merged));
  return merged;
}

double percentile(std::vector<double>& xs, double q) {
  std::sort(xs.begin(), xs.end());
  const double pos = q * static_cast<double>(xs.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, xs.size() - 1);
  return xs[lo] + (pos - static_cast<double>(lo)) * (xs[hi] - xs[lo]);
}

}  // namespace

Rational auc_plus_cover(const CoverCurve& a, const CoverCurve& b) {
  require_same_universe(a, b);
  const auto merged = merged_breakpoints(a, b);
  Rational area = 0;
  for (std::size_t j = 1; j < merged.size(); ++j) {
    const Rational gap = a.at(merged[j]) - b.at(merged[j]);
    if (gap > 0) area += gap * (merged[j] - merged[j - 1]);
  }
  return area;
}

std::vector<Rational> avg_auc_plus(std::span<const CoverCurve> curves) {
  if (curves.size() < 2) throw Error("AvgAUC+ needs at least two models");
  const std::size_t m = curves.size();
  std::vector<Rational> out(m, Rational(0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i != j) out[i] += auc_plus_cover(curves[i], curves[j]);
    }
    out[i] /= static_cast<long long>(m - 1);
  }
  return out;
}

bool check_cover_dominance(const CoverCurve& a, const CoverCurve& b) {
  require_same_universe(a, b);
  for (const auto& x : merged_breakpoints(a, b)) {
    if (a.at(x) < b.at(x)) return false;
  }
  return true;
}

CrossoverResult find_crossover(const PassCurve& a, const PassCurve& b) {
  if (a.ks != b.ks || a.values.size() != a.ks.size() || b.values.size() != b.ks.size()) {
    throw Error("pass curves for '" + a.model + "' and '" + b.model +
                "' are on different k grids");
  }
  CrossoverResult out{a.model, b.model, std::nullopt};
  int last_sign = 0;
  for (std::size_t i = 0; i < a.ks.size(); ++i) {
    const int sign = (a.values[i] > b.values[i]) - (a.values[i] < b.values[i]);
    if (sign == 0) continue;
    if (last_sign != 0 && sign != last_sign) {
      out.k_star = a.ks[i];
      out.before = last_sign > 0 ? Leader::kFirst : Leader::kSecond;
      out.after = sign > 0 ? Leader::kFirst : Leader::kSecond;
      return out;
    }
    last_sign = sign;
  }
  return out;
}

std::vector<RankEntry> rank_models(const std::map<std::string, double>& values) {
  if (values.empty()) throw Error("nothing to rank");
  std::vector<RankEntry> out;
  for (const auto& [model, value] : values) out.push_back({model, value, 0});
  // std::map iteration is already name-ordered; stable sort keeps it for ties.
  std::stable_sort(out.begin(), out.end(),
                   [](const RankEntry& x, const RankEntry& y) { return x.value > y.value; });
  int rank = 0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (i == 0 || out[i].value != out[i - 1].value) ++rank;
    out[i].rank = rank;
  }
  return out;
}

DominanceReport build_dominance_report(std::span<const SuccessProfile> aligned,
                                       std::span<const Rational> taus,
                                       std::span<const std::uint64_t> ks) {
  if (aligned.size() < 2) throw Error("dominance report needs at least two models");
  const std::size_t m = aligned.size();
  DominanceReport r;
  std::vector<CoverCurve> curves;
  std::vector<PassCurve> passes;
  for (const auto& prof : aligned) {
    r.models.push_back(prof.model());
    curves.push_back(build_cover_curve(prof));
    passes.push_back(pass_curve(prof, ks));
  }
  r.auc_plus.assign(m, std::vector<Rational>(m, Rational(0)));
  r.dominates.assign(m, std::vector<bool>(m, true));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      r.auc_plus[i][j] = auc_plus_cover(curves[i], curves[j]);
      r.dominates[i][j] = check_cover_dominance(curves[i], curves[j]);
    }
  }
  r.avg_auc_plus.assign(m, Rational(0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) r.avg_auc_plus[i] += r.auc_plus[i][j];
    r.avg_auc_plus[i] /= static_cast<long long>(m - 1);
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      r.crossovers.push_back(find_crossover(passes[i], passes[j]));
    }
  }

  auto add_ranking = [&](const std::string& name, auto&& metric) {
    std::map<std::string, double> values;
    for (std::size_t i = 0; i < m; ++i) values[r.models[i]] = metric(i);
    r.rankings[name] = rank_models(values);
  };
  add_ranking("pass@1", [&](std::size_t i) { return to_double(mean_success(aligned[i])); });
  for (const auto& tau : taus) {
    add_ranking("cov@" + decimal_label(tau),
                [&](std::size_t i) { return to_double(curves[i].at(tau)); });
  }
  add_ranking("G(0+)", [&](std::size_t i) { return to_double(fraction_nonzero(aligned[i])); });
  if (!ks.empty()) {
    add_ranking("pass@" + std::to_string(ks.back()),
                [&](std::size_t i) { return passes[i].values.back(); });
  }
  add_ranking("avg_auc_plus", [&](std::size_t i) { return to_double(r.avg_auc_plus[i]); });
  return r;
}

BootstrapBands bootstrap_bands(std::span<const SuccessProfile> aligned,
                               std::span<const Rational> taus, std::size_t resamples,
                               std::uint64_t seed) {
  if (aligned.empty()) throw Error("bootstrap needs at least one model");
  if (resamples < 2) throw Error("bootstrap needs at least two resamples");
  const std::size_t m = aligned.size();
  const std::size_t t = aligned.front().task_count();
  for (const auto& prof : aligned) {
    if (prof.task_count() != t) throw Error("bootstrap expects aligned profiles");
  }

  // samples[model][tau] and auc_samples[model], one value per resample.
  std::vector<std::vector<std::vector<double>>> cover_samples(
      m, std::vector<std::vector<double>>(taus.size()));
  std::vector<std::vector<double>> auc_samples(m);
  std::vector<std::size_t> picks(t);
  for (std::size_t r = 0; r < resamples; ++r) {
    Stream stream = Stream::keyed(seed, r);
    for (auto& idx : picks) idx = static_cast<std::size_t>(stream.below(t));
    std::vector<CoverCurve> curves;
    for (std::size_t i = 0; i < m; ++i) {
      std::vector<TaskProbability> entries;
      entries.reserve(t);
      for (std::size_t pos = 0; pos < t; ++pos) {
        entries.push_back({"r" + std::to_string(pos), aligned[i].entries()[picks[pos]].p});
      }
      const SuccessProfile resampled(aligned[i].model(), std::move(entries));
      for (std::size_t q = 0; q < taus.size(); ++q) {
        cover_samples[i][q].push_back(to_double(cover_at_tau(resampled, taus[q])));
      }
      curves.push_back(build_cover_curve(resampled));
    }
    if (m >= 2) {
      const auto avg = avg_auc_plus(curves);
      for (std::size_t i = 0; i < m; ++i) auc_samples[i].push_back(to_double(avg[i]));
    }
  }

  BootstrapBands out{resamples, seed, {}, {}};
  for (std::size_t i = 0; i < m; ++i) {
    auto& bands = out.cover[aligned[i].model()];
    for (auto& xs : cover_samples[i]) bands.push_back({percentile(xs, 0.025), percentile(xs, 0.975)});
    if (m >= 2) {
      out.avg_auc_plus[aligned[i].model()] = {percentile(auc_samples[i], 0.025),
                                              percentile(auc_samples[i], 0.975)};
    }
  }
  return out;
}

}  // namespace covtau
