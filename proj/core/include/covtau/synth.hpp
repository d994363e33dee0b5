#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "covtau/metrics.hpp"
#include "covtau/rational.hpp"

namespace covtau {

inline constexpr std::uint64_t kDefaultSeed = 1;

enum class Generator { kConstant, kTwoPoint, kUniformRandom, kUserList };

struct ProfileSpec {
  std::string model = "model";
  Generator generator = Generator::kConstant;
  std::size_t tasks = 100;
  std::uint64_t seed = kDefaultSeed;
  /// constant: p for every task.
  Rational p = make_rational(1, 2);
  /// two-point: the first round(ratio * tasks) tasks get `low`, the rest `high`.
  Rational low = 0;
  Rational high = 1;
  Rational ratio = make_rational(1, 2);
  /// uniform-random: p = u / resolution with u uniform on {0, ..., resolution}.
  std::uint64_t resolution = 1'000'000;
  /// user list: one p per task; `tasks` is ignored.
  std::vector<Rational> values;
};

/// Task identifiers are zero-padded ordinals ("t0000", "t0001", ...) so that
/// lexicographic order equals generation order.
std::string task_name(std::size_t index, std::size_t total);

SuccessProfile make_profile(const ProfileSpec& spec);

/// n Bernoulli(p) verdicts per task; trial j of task i draws from the keyed
/// substream (seed, i, j). Output is task-major, trial-minor.
std::vector<SampleRecord> simulate_completions(const SuccessProfile& profile,
                                               std::uint64_t n,
                                               std::uint64_t seed);

/// Exactly p*n correct trials per task (p*n must be an integer), placed at
/// positions drawn by a seeded shuffle. Reproduces a profile without
/// sampling noise.
std::vector<SampleRecord> simulate_exact_counts(const SuccessProfile& profile,
                                                std::uint64_t n, std::uint64_t seed);

struct GuesserSpec {
  std::string model = "guesser";
  std::uint64_t support_size = 30;
  std::size_t tasks = 30;
  std::uint64_t trials = 8192;
  std::uint64_t seed = kDefaultSeed;
};

/// Label of the correct answer in the guesser's answer space "0".."m-1".
inline constexpr const char* kGuesserGold = "0";

struct GuesserRun {
  SuccessProfile profile;
  std::vector<SampleRecord> records;
};

/// Uniform guessing over support_size labels; exact profile is 1/m per task.
GuesserRun simulate_guesser(const GuesserSpec& spec);

}  // namespace covtau
