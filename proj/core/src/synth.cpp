#include "covtau/synth.hpp"

#include <algorithm>

#include "covtau/error.hpp"
#include "covtau/random.hpp"

namespace covtau {
namespace {

void require_probability(const Rational& p, const char* name) {
  if (p < 0 || p > 1) {
    throw Error(std::string(name) + " = " + to_string(p) + " is outside [0, 1]");
  }
}

}  // namespace

std::string task_name(std::size_t index, std::size_t total) {
  std::size_t width = 1;
  for (std::size_t top = total > 0 ? total - 1 : 0; top >= 10; top /= 10) ++width;
  width = std::max<std::size_t>(width, 4);
  std::string digits = std::to_string(index);
  if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
  return "t" + digits;
}

SuccessProfile make_profile(const ProfileSpec& spec) {
  std::vector<Rational> ps;
  switch (spec.generator) {
    case Generator::kConstant:
      require_probability(spec.p, "p");
      ps.assign(spec.tasks, spec.p);
      break;
    case Generator::kTwoPoint: {
      require_probability(spec.low, "low");
      require_probability(spec.high, "high");
      require_probability(spec.ratio, "ratio");
      // round(ratio * T), halves rounding up
      const Rational scaled = spec.ratio * static_cast<unsigned long long>(spec.tasks) +
                              make_rational(1, 2);
      const auto n_low = static_cast<std::size_t>(
          BigInt(numerator(scaled) / denominator(scaled)).convert_to<unsigned long long>());
      for (std::size_t i = 0; i < spec.tasks; ++i) ps.push_back(i < n_low ? spec.low : spec.high);
      break;
    }
    case Generator::kUniformRandom: {
      if (spec.resolution < 1) throw Error("resolution must be >= 1");
      for (std::size_t i = 0; i < spec.tasks; ++i) {
        Stream stream = Stream::keyed(spec.seed, i);
        const std::uint64_t u = stream.below(spec.resolution + 1);
        ps.emplace_back(BigInt(u), BigInt(spec.resolution));
      }
      break;
    }
    case Generator::kUserList:
      for (const auto& p : spec.values) require_probability(p, "p");
      ps = spec.values;
      break;
  }
  if (ps.empty()) throw Error("profile spec produces no tasks");
  std::vector<TaskProbability> entries;
  entries.reserve(ps.size());
  for (std::size_t i = 0; i < ps.size(); ++i) {
    entries.push_back({task_name(i, ps.size()), std::move(ps[i])});
  }
  return SuccessProfile(spec.model, std::move(entries));
}

std::vector<SampleRecord> simulate_completions(const SuccessProfile& profile, std::uint64_t n,
                                               std::uint64_t seed) {
  if (n < 1) throw Error("simulation needs n >= 1 trials");
  std::vector<SampleRecord> records;
  records.reserve(profile.task_count() * n);
  const auto& entries = profile.entries();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const double p = to_double(entries[i].p);
    for (std::uint64_t j = 0; j < n; ++j) {
      Stream stream = Stream::keyed(seed, i, j);
      records.push_back({profile.model(), entries[i].task, j, std::nullopt, stream.uniform() < p});
    }
  }
  return records;
}

std::vector<SampleRecord> simulate_exact_counts(const SuccessProfile& profile, std::uint64_t n,
                                                std::uint64_t seed) {
  if (n < 1) throw Error("simulation needs n >= 1 trials");
  std::vector<SampleRecord> records;
  records.reserve(profile.task_count() * n);
  const auto& entries = profile.entries();
  std::vector<std::uint64_t> order(n);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const Rational expected = entries[i].p * static_cast<unsigned long long>(n);
    if (denominator(expected) != 1) {
      throw Error("task '" + entries[i].task + "': p = " + to_string(entries[i].p) + " times n = " +
                  std::to_string(n) + " is not a whole number of successes");
    }
    const auto c = numerator(expected).convert_to<std::uint64_t>();
    for (std::uint64_t j = 0; j < n; ++j) order[j] = j;
    // Partial Fisher-Yates: the first c slots become the correct trials.
    Stream stream = Stream::keyed(seed, i, UINT64_MAX);
    for (std::uint64_t j = 0; j < c; ++j) {
      std::swap(order[j], order[j + stream.below(n - j)]);
    }
    std::vector<bool> correct(n, false);
    for (std::uint64_t j = 0; j < c; ++j) correct[order[j]] = true;
    for (std::uint64_t j = 0; j < n; ++j) {
      records.push_back({profile.model(), entries[i].task, j, std::nullopt, correct[j]});
    }
  }
  return records;
}

GuesserRun simulate_guesser(const GuesserSpec& spec) {
  if (spec.support_size < 2) throw Error("guesser support size must be >= 2");
  if (spec.tasks < 1) throw Error("guesser needs at least one task");
  if (spec.trials < 1) throw Error("guesser needs at least one trial");
  const Rational p(BigInt(1), BigInt(spec.support_size));
  std::vector<TaskProbability> entries;
  std::vector<SampleRecord> records;
  records.reserve(spec.tasks * spec.trials);
  for (std::size_t i = 0; i < spec.tasks; ++i) {
    const std::string task = task_name(i, spec.tasks);
    entries.push_back({task, p});
    for (std::uint64_t j = 0; j < spec.trials; ++j) {
      Stream stream = Stream::keyed(spec.seed, i, j);
      const std::uint64_t label = stream.below(spec.support_size);
      records.push_back({spec.model, task, j, std::to_string(label), label == 0});
    }
  }
  return {SuccessProfile(spec.model, std::move(entries)), std::move(records)};
}

}  // namespace covtau
