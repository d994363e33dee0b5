#include "covtau/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <tuple>

#include "covtau/error.hpp"
#include "covtau/ingest.hpp"

namespace covtau {

SuccessProfile::SuccessProfile(std::string model, std::vector<TaskProbability> entries)
    : model_(std::move(model)), entries_(std::move(entries)) {
  if (entries_.empty()) {
    throw Error("success profile for model '" + model_ + "' has no tasks");
  }
  std::sort(entries_.begin(), entries_.end(),
            [](const TaskProbability& a, const TaskProbability& b) { return a.task < b.task; });
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    if (e.p < 0 || e.p > 1) {
      throw Error("success probability " + to_string(e.p) + " for task '" + e.task +
                  "' is outside [0, 1]");
    }
    if (i > 0 && entries_[i - 1].task == e.task) {
      throw Error("duplicate task '" + e.task + "' in profile for model '" + model_ + "'");
    }
  }
}

CountsByModel aggregate(std::span<const SampleRecord> records) {
  if (records.empty()) throw Error("no records to aggregate");
  std::set<std::tuple<std::string_view, std::string_view, std::uint64_t>> seen;
  std::map<std::string, std::map<std::string, TaskCounts>> grouped;
  for (const auto& r : records) {
    if (!seen.emplace(r.model, r.task, r.sample_index).second) {
      throw Error("duplicate record (model='" + r.model + "', task='" + r.task +
                  "', sample_index=" + std::to_string(r.sample_index) + ")");
    }
    auto& tc = grouped[r.model][r.task];
    tc.task = r.task;
    ++tc.n;
    if (r.correct) ++tc.c;
  }
  CountsByModel out;
  for (auto& [model, tasks] : grouped) {
    auto& list = out[model];
    list.reserve(tasks.size());
    for (auto& [task, tc] : tasks) list.push_back(std::move(tc));
  }
  return out;
}

SuccessProfile estimate_success(const std::string& model, std::span<const TaskCounts> counts) {
  if (counts.empty()) throw Error("no task counts for model '" + model + "'");
  std::vector<TaskProbability> entries;
  entries.reserve(counts.size());
  for (const auto& tc : counts) {
    if (tc.n == 0) throw Error("task '" + tc.task + "' has n = 0 trials");
    if (tc.c > tc.n) {
      throw Error("task '" + tc.task + "' has c = " + std::to_string(tc.c) + " > n = " +
                  std::to_string(tc.n));
    }
    entries.push_back({tc.task, Rational(BigInt(tc.c), BigInt(tc.n))});
  }
  return SuccessProfile(model, std::move(entries));
}

double pass_at_k_exact(const SuccessProfile& profile, std::uint64_t k) {
  if (k < 1) throw Error("pass@k requires k >= 1");
  if (profile.task_count() == 0) throw Error("pass@k of an empty profile");
  const double kd = static_cast<double>(k);
  double sum = 0.0;
  for (const auto& e : profile.entries()) {
    // 1 - (1-p)^k without cancellation when p is small.
    const double p = to_double(e.p);
    sum += -std::expm1(kd * std::log1p(-p));
  }
  return sum / static_cast<double>(profile.task_count());
}

Rational mean_success(const SuccessProfile& profile) {
  if (profile.task_count() == 0) throw Error("mean of an empty profile");
  Rational sum = 0;
  for (const auto& e : profile.entries()) sum += e.p;
  return sum / profile.task_count();
}

namespace {

void check_unbiased_args(const TaskCounts& counts, std::uint64_t k) {
  if (k < 1) throw Error("pass@k estimator requires k >= 1");
  if (counts.n == 0) throw Error("task '" + counts.task + "' has n = 0 trials");
  if (counts.c > counts.n) throw Error("task '" + counts.task + "' has c > n");
  if (k > counts.n) {
    throw Error("pass@k estimator undefined for k = " + std::to_string(k) + " > n = " +
                std::to_string(counts.n) + " (task '" + counts.task + "')");
  }
}

}  // namespace

double pass_at_k_unbiased(const TaskCounts& counts, std::uint64_t k) {
  check_unbiased_args(counts, k);
  const std::uint64_t failures = counts.n - counts.c;
  if (failures < k) return 1.0;
  double all_fail = 1.0;
  for (std::uint64_t j = 0; j < k; ++j) {
    all_fail *= static_cast<double>(failures - j) / static_cast<double>(counts.n - j);
  }
  return 1.0 - all_fail;
}

Rational pass_at_k_unbiased_rational(const TaskCounts& counts, std::uint64_t k) {
  check_unbiased_args(counts, k);
  if (counts.n > 64) throw Error("exact estimator limited to n <= 64");
  const std::uint64_t failures = counts.n - counts.c;
  if (failures < k) return 1;
  Rational all_fail = 1;
  for (std::uint64_t j = 0; j < k; ++j) {
    all_fail *= Rational(BigInt(failures - j), BigInt(counts.n - j));
  }
  return 1 - all_fail;
}

Rational cover_at_tau(const SuccessProfile& profile, const Rational& tau) {
  if (tau < 0 || tau > 1) throw Error("tau " + to_string(tau) + " is outside [0, 1]");
  if (profile.task_count() == 0) throw Error("cover of an empty profile");
  std::size_t hits = 0;
  for (const auto& e : profile.entries()) {
    if (e.p >= tau) ++hits;
  }
  return Rational(BigInt(hits), BigInt(profile.task_count()));
}

Rational maj_at_n(std::span<const TaskCounts> counts) {
  if (counts.empty()) throw Error("maj@n of an empty count list");
  std::size_t solved = 0;
  for (const auto& tc : counts) {
    if (tc.n == 0) throw Error("task '" + tc.task + "' has n = 0 trials");
    if (tc.c > tc.n) throw Error("task '" + tc.task + "' has c > n");
    if (2 * tc.c > tc.n) ++solved;
  }
  return Rational(BigInt(solved), BigInt(counts.size()));
}

Rational majority_threshold(std::uint64_t n) {
  if (n == 0) throw Error("majority threshold requires n >= 1");
  return Rational(BigInt(n / 2 + 1), BigInt(n));
}

namespace {

// Answers that parse as the same number share a key ("0.5" and ".5").
std::string answer_key(const std::string& answer) {
  if (const auto x = parse_number(answer)) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "#%.17g", *x == 0.0 ? 0.0 : *x);
    return buf;
  }
  return normalize_answer(answer);
}

}  // namespace

Rational cons_at_n(std::span<const SampleRecord> records,
                   const std::map<std::string, std::string>& gold) {
  if (records.empty()) throw Error("cons@n of an empty record list");
  const std::string& model = records.front().model;
  // task -> key -> (count, representative answer)
  std::map<std::string, std::map<std::string, std::pair<std::size_t, std::string>>> tallies;
  for (const auto& r : records) {
    if (r.model != model) {
      throw Error("cons@n expects one model, got '" + model + "' and '" + r.model + "'");
    }
    if (!r.answer) {
      throw Error("record (model='" + r.model + "', task='" + r.task +
                  "', sample_index=" + std::to_string(r.sample_index) + ") has no answer text");
    }
    auto& slot = tallies[r.task][answer_key(*r.answer)];
    if (slot.first++ == 0) slot.second = *r.answer;
  }
  std::size_t solved = 0;
  for (const auto& [task, counts] : tallies) {
    const auto g = gold.find(task);
    if (g == gold.end()) throw Error("no gold answer for task '" + task + "'");
    std::size_t best = 0;
    std::size_t holders = 0;
    const std::string* mode = nullptr;
    for (const auto& [key, slot] : counts) {
      if (slot.first > best) {
        best = slot.first;
        holders = 1;
        mode = &slot.second;
      } else if (slot.first == best) {
        ++holders;
      }
    }
    if (holders == 1 && grade(*mode, g->second)) ++solved;
  }
  return Rational(BigInt(solved), BigInt(tallies.size()));
}

AlignedProfiles align_profiles(std::span<const SuccessProfile> profiles) {
  if (profiles.empty()) throw Error("no profiles to align");
  std::set<std::string> shared;
  for (const auto& e : profiles.front().entries()) shared.insert(e.task);
  for (const auto& prof : profiles.subspan(1)) {
    std::set<std::string> next;
    for (const auto& e : prof.entries()) {
      if (shared.count(e.task)) next.insert(e.task);
    }
    shared.swap(next);
  }
  if (shared.empty()) throw Error("the models share no tasks");

  AlignedProfiles out;
  for (const auto& prof : profiles) {
    std::vector<TaskProbability> kept;
    std::vector<std::string> dropped;
    for (const auto& e : prof.entries()) {
      if (shared.count(e.task)) {
        kept.push_back(e);
      } else {
        dropped.push_back(e.task);
      }
    }
    if (!dropped.empty()) out.dropped[prof.model()] = std::move(dropped);
    out.profiles.emplace_back(prof.model(), std::move(kept));
  }
  return out;
}

}  // namespace covtau
