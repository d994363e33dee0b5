#include "covtau/metrics.hpp"

#include <gtest/gtest.h>

#include "covtau/error.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

namespace covtau {
namespace {

using testing::R;
using testing::profile_of;
using testing::repeat;

SampleRecord rec(const std::string& model, const std::string& task, std::uint64_t i, bool ok) {
  return {model, task, i, std::nullopt, ok};
}

TEST(Aggregate, CountsTrialsAndSuccesses) {
  std::vector<SampleRecord> records{rec("m", "t", 0, true), rec("m", "t", 1, false),
                                    rec("m", "t", 2, true), rec("m", "t", 3, false)};
  const auto counts = aggregate(records);
  ASSERT_EQ(counts.size(), 1u);
  EXPECT_EQ(counts.at("m"), (std::vector<TaskCounts>{{"t", 4, 2}}));
}

TEST(Aggregate, AllWrong) {
  std::vector<SampleRecord> records;
  for (int i = 0; i < 8; ++i) records.push_back(rec("m", "t", i, false));
  EXPECT_EQ(aggregate(records).at("m"), (std::vector<TaskCounts>{{"t", 8, 0}}));
}

TEST(Aggregate, TwoModelsSharingTasks) {
  // x: t1 1/2, t2 1/1; y: t1 0/1, t2 2/2 -- counted by hand.
  std::vector<SampleRecord> records{rec("x", "t1", 0, true), rec("y", "t1", 0, false),
                                    rec("x", "t1", 1, false), rec("x", "t2", 0, true),
                                    rec("y", "t2", 0, true), rec("y", "t2", 1, true)};
  const auto counts = aggregate(records);
  EXPECT_EQ(counts.at("x"), (std::vector<TaskCounts>{{"t1", 2, 1}, {"t2", 1, 1}}));
  EXPECT_EQ(counts.at("y"), (std::vector<TaskCounts>{{"t1", 1, 0}, {"t2", 2, 2}}));
}

TEST(Aggregate, RejectsDuplicatesAndEmptyInput) {
  std::vector<SampleRecord> dup{rec("m", "t", 3, true), rec("m", "t", 3, false)};
  try {
    aggregate(dup);
    FAIL() << "expected rejection";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("sample_index=3"), std::string::npos);
  }
  EXPECT_THROW(aggregate(std::vector<SampleRecord>{}), Error);
}

TEST(EstimateSuccess, PlugInRationals) {
  std::vector<TaskCounts> counts{{"a", 4, 2}, {"b", 3, 1}, {"c", 8192, 0}};
  const auto prof = estimate_success("m", counts);
  EXPECT_EQ(prof.entries()[0].p, R(1, 2));
  EXPECT_EQ(prof.entries()[1].p, R(1, 3));
  EXPECT_EQ(prof.entries()[2].p, R(0));
  EXPECT_THROW(estimate_success("m", std::vector<TaskCounts>{{"a", 0, 0}}), Error);
  EXPECT_THROW(estimate_success("m", std::vector<TaskCounts>{}), Error);
}

TEST(SuccessProfile, RejectsInvalidEntries) {
  EXPECT_THROW(SuccessProfile("m", {}), Error);
  EXPECT_THROW(SuccessProfile("m", {{"a", R(3, 2)}}), Error);
  EXPECT_THROW(SuccessProfile("m", {{"a", R(1, 2)}, {"a", R(1, 3)}}), Error);
}

TEST(PassAtKExact, Examples) {
  EXPECT_DOUBLE_EQ(pass_at_k_exact(repeat("A", R(1, 2), 2), 1), 0.5);
  EXPECT_DOUBLE_EQ(pass_at_k_exact(profile_of("m", {R(0), R(1)}), 7), 0.5);
  EXPECT_GE(pass_at_k_exact(repeat("g", R(1, 30), 30), 8192), 1.0 - 1e-6);
  EXPECT_THROW(pass_at_k_exact(repeat("A", R(1, 2), 2), 0), Error);
}

TEST(PassAtKExact, MatchesExactRationalsAndMeanAtOne) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto prof = testing::random_counts_profile("m", 25, seed);
    EXPECT_NEAR(pass_at_k_exact(prof, 1), to_double(mean_success(prof)), 1e-12);
    for (std::uint64_t k : {1, 2, 3, 5, 8}) {
      EXPECT_NEAR(pass_at_k_exact(prof, k), to_double(oracle::pass_at_k_rational(prof, k)), 1e-12);
    }
  }
}

TEST(PassAtKExact, NonDecreasingAndDegenerate) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto prof = testing::random_counts_profile("m", 40, seed);
    double prev = 0.0;
    for (std::uint64_t k = 1; k <= (1u << 16); k *= 2) {
      const double v = pass_at_k_exact(prof, k);
      EXPECT_GE(v, prev);
      prev = v;
    }
  }
  // Every p >= 1/1000: Pass@2^20 is within 1e-6 of one.
  std::vector<Rational> ps;
  for (int i = 1; i <= 50; ++i) ps.push_back(R(i, 1000));
  EXPECT_GE(pass_at_k_exact(profile_of("m", ps), 1u << 20), 1.0 - 1e-6);
}

TEST(PassAtKUnbiased, Examples) {
  EXPECT_EQ(pass_at_k_unbiased({"t", 5, 5}, 3), 1.0);
  EXPECT_EQ(pass_at_k_unbiased({"t", 5, 0}, 3), 0.0);
  EXPECT_NEAR(pass_at_k_unbiased({"t", 3, 1}, 2), 2.0 / 3.0, 1e-15);
  EXPECT_EQ(pass_at_k_unbiased_rational({"t", 3, 1}, 2), R(2, 3));
  EXPECT_THROW(pass_at_k_unbiased({"t", 3, 1}, 4), Error);
  EXPECT_THROW(pass_at_k_unbiased({"t", 3, 1}, 0), Error);
  EXPECT_THROW(pass_at_k_unbiased_rational({"t", 65, 1}, 2), Error);
}

TEST(PassAtKUnbiased, EqualsSubsetEnumeration) {
  for (std::uint64_t n = 1; n <= 10; ++n) {
    for (std::uint64_t c = 0; c <= n; ++c) {
      for (std::uint64_t k = 1; k <= n; ++k) {
        const TaskCounts tc{"t", n, c};
        const Rational expected = oracle::subset_pass_rate(n, c, k);
        EXPECT_EQ(pass_at_k_unbiased_rational(tc, k), expected) << n << " " << c << " " << k;
        EXPECT_NEAR(pass_at_k_unbiased(tc, k), to_double(expected), 1e-14);
      }
      // At k = n the estimator is 1 exactly when some trial succeeded.
      EXPECT_EQ(pass_at_k_unbiased_rational({"t", n, c}, n), c >= 1 ? R(1) : R(0));
    }
  }
}

TEST(PassAtKUnbiased, LargeNStaysFinite) {
  const double v = pass_at_k_unbiased({"t", 1u << 20, 3}, 1u << 19);
  EXPECT_GT(v, 0.8);
  EXPECT_LE(v, 1.0);
}

TEST(CoverAtTau, Examples) {
  EXPECT_EQ(cover_at_tau(repeat("A", R(1, 2), 100), R(1, 5)), R(1));
  std::vector<Rational> half(50, R(0));
  half.resize(100, R(1));
  EXPECT_EQ(cover_at_tau(profile_of("B", half), R(4, 5)), R(1, 2));
  EXPECT_EQ(cover_at_tau(testing::random_counts_profile("m", 30, 3), R(0)), R(1));
  EXPECT_THROW(cover_at_tau(repeat("A", R(1, 2), 2), R(-1, 10)), Error);
  EXPECT_THROW(cover_at_tau(repeat("A", R(1, 2), 2), R(11, 10)), Error);
}

TEST(CoverAtTau, BreakpointIsInclusive) {
  // 4/8 >= 1/2 holds exactly; 0.1 + 0.2 style float drift cannot flip it.
  const auto prof = estimate_success("m", std::vector<TaskCounts>{{"a", 8, 4}, {"b", 10, 3}});
  EXPECT_EQ(cover_at_tau(prof, R(1, 2)), R(1, 2));
  EXPECT_EQ(cover_at_tau(prof, parse_rational("0.3")), R(1));
  EXPECT_EQ(cover_at_tau(prof, parse_rational("0.3000001")), R(1, 2));
}

TEST(CoverAtTau, NonIncreasingInTau) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto prof = testing::random_counts_profile("m", 30, seed);
    Rational prev = 1;
    for (int i = 0; i <= 200; ++i) {
      const Rational v = cover_at_tau(prof, R(i, 200));
      EXPECT_LE(v, prev);
      prev = v;
    }
  }
}

TEST(MajAtN, StrictMajority) {
  EXPECT_EQ(maj_at_n(std::vector<TaskCounts>{{"t", 8, 5}}), R(1));
  EXPECT_EQ(maj_at_n(std::vector<TaskCounts>{{"t", 8, 4}}), R(0));
  EXPECT_EQ(maj_at_n(std::vector<TaskCounts>{{"a", 8, 5}, {"b", 8, 4}, {"c", 8, 8}, {"d", 8, 0}}),
            R(1, 2));
  EXPECT_THROW(maj_at_n(std::vector<TaskCounts>{}), Error);
}

TEST(MajAtN, EqualsCoverAtMajorityThreshold) {
  for (std::uint64_t n : {1, 2, 3, 4, 7, 8, 31, 32}) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      std::vector<TaskCounts> counts;
      for (std::size_t i = 0; i < 20; ++i) {
        counts.push_back({"t" + std::to_string(100 + i), n, Stream::keyed(seed, i).below(n + 1)});
      }
      EXPECT_EQ(maj_at_n(counts), cover_at_tau(estimate_success("m", counts), majority_threshold(n)));
    }
  }
}

SampleRecord answered(const std::string& task, std::uint64_t i, const std::string& answer) {
  return {"m", task, i, answer, false};
}

TEST(ConsAtN, ModeRules) {
  std::map<std::string, std::string> gold{{"t1", "a"}, {"t2", "a"}, {"t3", "b"}};
  EXPECT_EQ(cons_at_n(std::vector{answered("t1", 0, "a"), answered("t1", 1, "a"), answered("t1", 2, "b")}, gold),
            R(1));
  EXPECT_EQ(cons_at_n(std::vector{answered("t2", 0, "a"), answered("t2", 1, "b")}, gold), R(0));
  EXPECT_EQ(cons_at_n(std::vector{answered("t3", 0, "b"), answered("t3", 1, "b"), answered("t3", 2, "a"),
                                  answered("t3", 3, "a"), answered("t3", 4, "a")},
                      gold),
            R(0));
}

TEST(ConsAtN, NormalizesAnswersBeforeVoting) {
  std::map<std::string, std::string> gold{{"t", "0.5"}};
  EXPECT_EQ(cons_at_n(std::vector{answered("t", 0, ".5"), answered("t", 1, "0.50"), answered("t", 2, "7")}, gold),
            R(1));
}

TEST(ConsAtN, Rejections) {
  std::map<std::string, std::string> gold{{"t", "a"}};
  SampleRecord missing{"m", "t", 4, std::nullopt, true};
  try {
    cons_at_n(std::vector{answered("t", 0, "a"), missing}, gold);
    FAIL() << "expected rejection";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("sample_index=4"), std::string::npos);
  }
  EXPECT_THROW(cons_at_n(std::vector{answered("u", 0, "a")}, gold), Error);
}

TEST(AlignProfiles, IntersectsTaskSetsAndNamesDrops) {
  const SuccessProfile a("a", {{"t1", R(1, 2)}, {"t2", R(1)}, {"t3", R(0)}});
  const SuccessProfile b("b", {{"t2", R(1, 3)}, {"t3", R(1)}, {"t4", R(1)}});
  const auto aligned = align_profiles(std::vector{a, b});
  ASSERT_EQ(aligned.profiles.size(), 2u);
  EXPECT_EQ(aligned.profiles[0].task_count(), 2u);
  EXPECT_EQ(aligned.dropped.at("a"), std::vector<std::string>{"t1"});
  EXPECT_EQ(aligned.dropped.at("b"), std::vector<std::string>{"t4"});
  const SuccessProfile c("c", {{"z", R(1)}});
  EXPECT_THROW(align_profiles(std::vector{a, c}), Error);
}

}  // namespace
}  // namespace covtau
