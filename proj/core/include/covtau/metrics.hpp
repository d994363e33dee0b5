#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "covtau/rational.hpp"

namespace covtau {

/// One completion's verdict.
struct SampleRecord {
  std::string model;
  std::string task;
  std::uint64_t sample_index = 0;
  std::optional<std::string> answer;
  bool correct = false;
};

/// Trials and successes for one (model, task). Invariant: 1 <= n, 0 <= c <= n.
struct TaskCounts {
  std::string task;
  std::uint64_t n = 0;
  std::uint64_t c = 0;

  friend bool operator==(const TaskCounts&, const TaskCounts&) = default;
};

struct TaskProbability {
  std::string task;
  Rational p;

  friend bool operator==(const TaskProbability&, const TaskProbability&) = default;
};

/// Per-task success probabilities of one model, ordered by task identifier.
class SuccessProfile {
 public:
  SuccessProfile() = default;

  /// Validates p in [0,1], unique task identifiers, and at least one entry;
  /// entries are sorted by task.
  SuccessProfile(std::string model, std::vector<TaskProbability> entries);

  const std::string& model() const { return model_; }
  const std::vector<TaskProbability>& entries() const { return entries_; }
  std::size_t task_count() const { return entries_.size(); }

  friend bool operator==(const SuccessProfile&, const SuccessProfile&) = default;

 private:
  std::string model_;
  std::vector<TaskProbability> entries_;
};

using CountsByModel = std::map<std::string, std::vector<TaskCounts>>;

/// Groups records by model, then task. Rejects empty input and duplicate
/// (model, task, sample_index) keys.
CountsByModel aggregate(std::span<const SampleRecord> records);

/// Plug-in estimate p = c/n per task, exact.
SuccessProfile estimate_success(const std::string& model,
                                std::span<const TaskCounts> counts);

double pass_at_k_exact(const SuccessProfile& profile, std::uint64_t k);

/// Mean of p, exact. Equals Pass@1.
Rational mean_success(const SuccessProfile& profile);

/// Subset estimator 1 - C(n-c, k)/C(n, k), evaluated as a running product.
double pass_at_k_unbiased(const TaskCounts& counts, std::uint64_t k);

/// Same estimator in exact arithmetic; used by oracle tests. n <= 64.
Rational pass_at_k_unbiased_rational(const TaskCounts& counts, std::uint64_t k);

/// Fraction of tasks with p >= tau, compared exactly.
Rational cover_at_tau(const SuccessProfile& profile, const Rational& tau);

/// Fraction of tasks where correct trials are a strict majority (2c > n).
Rational maj_at_n(std::span<const TaskCounts> counts);

/// Reliability threshold at which Cover@tau coincides with strict majority
/// for a shared trial count n: (floor(n/2) + 1) / n.
Rational majority_threshold(std::uint64_t n);

/// Fraction of tasks whose most frequent normalized answer grades equal to
/// the gold answer. A tied mode counts as unsolved. All records must belong
/// to one model and carry answer text.
Rational cons_at_n(std::span<const SampleRecord> records,
                   const std::map<std::string, std::string>& gold);

/// Profiles restricted to the tasks every model shares.
struct AlignedProfiles {
  std::vector<SuccessProfile> profiles;
  /// model -> tasks removed because some other model lacks them.
  std::map<std::string, std::vector<std::string>> dropped;
};

AlignedProfiles align_profiles(std::span<const SuccessProfile> profiles);

}  // namespace covtau
